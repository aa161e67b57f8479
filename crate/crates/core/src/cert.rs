//! Certificate levels attached to computed invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

/// How much a reported value is backed by.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "level", content = "detail", rename_all = "snake_case")]
pub enum CertStatus {
    Certified,
    /// Vanishing checked for indices up to the bound only.
    BoundedEvidence(usize),
    Failed(String),
}

impl CertStatus {
    fn rank(&self) -> u8 {
        match self {
            CertStatus::Certified => 2,
            CertStatus::BoundedEvidence(_) => 1,
            CertStatus::Failed(_) => 0,
        }
    }

    /// The weaker of two statuses; bounded evidence keeps the smaller bound.
    pub fn weakest(self, other: CertStatus) -> CertStatus {
        match (self, other) {
            (CertStatus::BoundedEvidence(a), CertStatus::BoundedEvidence(b)) => CertStatus::BoundedEvidence(a.min(b)),
            (a, b) => {
                if a.rank() <= b.rank() {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, CertStatus::Certified)
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, CertStatus::Failed(_))
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::Certified => write!(f, "certified"),
            CertStatus::BoundedEvidence(b) => write!(f, "bounded evidence (checked through {b})"),
            CertStatus::Failed(w) => write!(f, "failed: {w}"),
        }
    }
}

/// A non-negative integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Finite(usize),
    Infinite,
}

impl Value {
    pub fn finite(self) -> Option<usize> {
        match self {
            Value::Finite(v) => Some(v),
            Value::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Value::Infinite
    }

    /// `self + k`, infinite stays infinite.
    pub fn plus(self, k: usize) -> Value {
        match self {
            Value::Finite(v) => Value::Finite(v + k),
            Value::Infinite => Value::Infinite,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(v) => write!(f, "{v}"),
            Value::Infinite => write!(f, "inf"),
        }
    }
}

/// A value together with its certificate and an optional witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graded<T> {
    pub value: T,
    pub status: CertStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl<T> Graded<T> {
    pub fn certified(value: T) -> Self {
        Graded { value, status: CertStatus::Certified, witness: None }
    }

    pub fn new(value: T, status: CertStatus) -> Self {
        Graded { value, status, witness: None }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weakest_status() {
        let c = CertStatus::Certified;
        let b3 = CertStatus::BoundedEvidence(3);
        let b1 = CertStatus::BoundedEvidence(1);
        assert_eq!(c.clone().weakest(b3.clone()), b3);
        assert_eq!(b3.clone().weakest(b1.clone()), b1);
        assert!(b1.weakest(CertStatus::Failed("x".into())).is_failed());
    }

    #[test]
    fn value_order() {
        assert!(Value::Finite(7) < Value::Infinite);
        assert_eq!(Value::Finite(2).plus(3), Value::Finite(5));
        assert_eq!(Value::Infinite.to_string(), "inf");
    }
}
