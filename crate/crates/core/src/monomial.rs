//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub type Exp = u16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: SmallVec<[Exp; 6]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: SmallVec::from_elem(0, nvars) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[Exp]) -> Self {
        Monomial { exps: SmallVec::from_slice(exps) }
    }

    pub fn exponents(&self) -> &[Exp] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, weights: &[u32]) -> u32 {
        self.exps.iter().zip(weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps = other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect();
        Monomial { exps }
    }

    pub fn checked_div(&self, by: &Monomial) -> Option<Monomial> {
        if by.divides(self) {
            Some(by.quotient_of(self))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        Monomial { exps }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect();
        Monomial { exps }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum OrderKind {
    #[default]
    DegRevLex,
    DegLex,
    Lex,
}

impl OrderKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::DegLex => "deglex",
            OrderKind::Lex => "lex",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "degrevlex" => Some(OrderKind::DegRevLex),
            "deglex" => Some(OrderKind::DegLex),
            "lex" => Some(OrderKind::Lex),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub weights: Vec<u32>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, weights: Vec<u32>) -> Self {
        MonomialOrder { kind, weights }
    }

    pub fn standard(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder { kind, weights: vec![1; nvars] }
    }

    /// `Greater` means `a` is the larger monomial.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.exps.cmp(&b.exps),
            OrderKind::DegLex => a
                .degree(&self.weights)
                .cmp(&b.degree(&self.weights))
                .then_with(|| a.exps.cmp(&b.exps)),
            OrderKind::DegRevLex => a
                .degree(&self.weights)
                .cmp(&b.degree(&self.weights))
                .then_with(|| {
                    for i in (0..a.exps.len()).rev() {
                        match a.exps[i].cmp(&b.exps[i]) {
                            Ordering::Equal => continue,
                            o => return o.reverse(),
                        }
                    }
                    Ordering::Equal
                }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[Exp]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn degrevlex_small_cases() {
        let o = MonomialOrder::standard(OrderKind::DegRevLex, 3);
        // x*z < y^2 in degrevlex
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
        let lex = MonomialOrder::standard(OrderKind::Lex, 3);
        assert_eq!(lex.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 0])), Ordering::Greater);
        let dl = MonomialOrder::standard(OrderKind::DegLex, 3);
        assert_eq!(dl.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn weighted_degree() {
        let o = MonomialOrder::new(OrderKind::DegRevLex, vec![3, 4, 5]);
        assert_eq!(m(&[1, 1, 1]).degree(&o.weights), 12);
        // a^3 (deg 9) > b*c (deg 9)? same degree, revlex decides on c
        assert_eq!(o.cmp(&m(&[3, 0, 0]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    fn arb_mon() -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(0u16..5, 3).prop_map(|v| Monomial::from_exponents(&v))
    }

    fn arb_order() -> impl Strategy<Value = MonomialOrder> {
        (
            prop_oneof![Just(OrderKind::DegRevLex), Just(OrderKind::DegLex), Just(OrderKind::Lex)],
            proptest::collection::vec(1u32..4, 3),
        )
            .prop_map(|(k, w)| MonomialOrder::new(k, w))
    }

    proptest! {
        #[test]
        fn order_axioms(o in arb_order(), a in arb_mon(), b in arb_mon(), c in arb_mon()) {
            let one = Monomial::one(3);
            // totality and antisymmetry
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
            // 1 is the minimum
            prop_assert_ne!(o.cmp(&one, &a), Ordering::Greater);
            // multiplicativity
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)));
            // transitivity
            if o.cmp(&a, &b) != Ordering::Less && o.cmp(&b, &c) != Ordering::Less {
                prop_assert_ne!(o.cmp(&a, &c), Ordering::Less);
            }
        }

        #[test]
        fn sorting_is_consistent(o in arb_order(), ms in proptest::collection::vec(arb_mon(), 1..20)) {
            let mut v = ms.clone();
            v.sort_by(|x, y| o.cmp(x, y));
            for w in v.windows(2) {
                prop_assert_ne!(o.cmp(&w[0], &w[1]), Ordering::Greater);
            }
        }

        #[test]
        fn lcm_gcd(a in arb_mon(), b in arb_mon()) {
            let l = a.lcm(&b);
            let g = a.gcd(&b);
            prop_assert!(a.divides(&l) && b.divides(&l));
            prop_assert!(g.divides(&a) && g.divides(&b));
            prop_assert_eq!(l.mul(&g), a.mul(&b));
        }
    }
}
