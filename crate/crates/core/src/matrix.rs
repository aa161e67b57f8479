//! Homogeneous matrices between twisted free modules, stored by columns.

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};
use crate::vector::{FreeModule, ModuleElement, Space};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMap {
    pub source: FreeModule,
    pub target: FreeModule,
    /// Image of source basis vector `j`, an element of `target`.
    pub columns: Vec<ModuleElement>,
}

impl GradedMap {
    pub fn new(source: FreeModule, target: FreeModule, columns: Vec<ModuleElement>) -> Self {
        GradedMap { source, target, columns }
    }

    pub fn zero_map(source: FreeModule, target: FreeModule) -> Self {
        let n = source.rank();
        GradedMap { source, target, columns: vec![ModuleElement::zero(); n] }
    }

    pub fn identity(free: &FreeModule, ring: &PolyRing) -> Self {
        let s = Space::new(ring, free);
        GradedMap::new(free.clone(), free.clone(), (0..free.rank()).map(|i| s.unit(i)).collect())
    }

    pub fn entry(&self, ring: &PolyRing, i: usize, j: usize) -> Poly {
        Space::new(ring, &self.target).component(&self.columns[j], i)
    }

    /// Entry (i, j) must be zero or homogeneous of degree source_j - target_i.
    pub fn check_homogeneous(&self, ring: &PolyRing) -> Result<()> {
        if self.columns.len() != self.source.rank() {
            return Err(Error::Contract("column count differs from source rank".into()));
        }
        let s = Space::new(ring, &self.target);
        for (j, c) in self.columns.iter().enumerate() {
            match s.degree(c) {
                Err(()) => return Err(Error::NotHomogeneous(s.display(c))),
                Ok(Some(d)) if d != self.source.twists[j] => {
                    return Err(Error::NotHomogeneous(format!(
                        "column {j} has degree {d}, source twist is {}",
                        self.source.twists[j]
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, ring: &PolyRing, other: &GradedMap) -> GradedMap {
        let s = Space::new(ring, &self.target);
        let cols = other.columns.iter().map(|c| s.apply(&self.columns, c)).collect();
        GradedMap::new(other.source.clone(), self.target.clone(), cols)
    }

    /// True if some entry is a nonzero constant.
    pub fn has_unit_entry(&self) -> bool {
        self.columns.iter().any(|c| c.terms().iter().any(|t| t.mon.is_one()))
    }

    /// Sum of the degrees of the nonzero entries; entries are homogeneous.
    pub fn entry_degree_sum(&self) -> u64 {
        let mut total = 0u64;
        for (j, c) in self.columns.iter().enumerate() {
            let mut seen = vec![false; self.target.rank()];
            for t in c.terms() {
                let i = t.comp as usize;
                if !seen[i] {
                    seen[i] = true;
                    total += (self.source.twists[j] - self.target.twists[i]).max(0) as u64;
                }
            }
        }
        total
    }

    pub fn display(&self, ring: &PolyRing) -> String {
        let rows: Vec<String> = (0..self.target.rank())
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.source.rank()).map(|j| ring.display(&self.entry(ring, i, j))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        rows.join("\n")
    }
}
