//! Sparse polynomials over a prime field.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::field::{Coeff, PrimeField};
use crate::monomial::{Monomial, MonomialOrder, OrderKind};

/// Ambient polynomial ring `F_p[x_1..x_n]` with a positive grading and a monomial order.
#[derive(Clone, Debug)]
pub struct PolyRing {
    vars: Vec<String>,
    field: PrimeField,
    order: MonomialOrder,
    id: u64,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.vars == other.vars
            && self.field == other.field
            && self.order == other.order
    }
}
impl Eq for PolyRing {}

/// A polynomial, terms sorted strictly descending in the ring's order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: u64,
    terms: Vec<(Monomial, Coeff)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl PolyRing {
    pub fn new(vars: Vec<String>, weights: Vec<u32>, field: PrimeField, kind: OrderKind) -> Result<Self> {
        if weights.len() != vars.len() {
            return Err(Error::Contract(format!(
                "{} weights given for {} variables",
                weights.len(),
                vars.len()
            )));
        }
        if weights.contains(&0) {
            return Err(Error::Contract("weights must be positive".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Contract(format!("duplicate variable {v}")));
            }
        }
        let order = MonomialOrder::new(kind, weights);
        let mut h = DefaultHasher::new();
        vars.hash(&mut h);
        order.hash(&mut h);
        field.hash(&mut h);
        let id = h.finish();
        Ok(PolyRing { vars, field, order, id })
    }

    /// Standard-graded degrevlex ring over the default field.
    pub fn standard(vars: &[&str]) -> Self {
        let n = vars.len();
        PolyRing::new(
            vars.iter().map(|s| s.to_string()).collect(),
            vec![1; n],
            PrimeField::default(),
            OrderKind::DegRevLex,
        )
        .expect("valid standard ring")
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn field(&self) -> &PrimeField {
        &self.field
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }
    pub fn weights(&self) -> &[u32] {
        &self.order.weights
    }
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: self.id, terms: Vec::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> Poly {
        let c = self.field.from_i64(c);
        self.monomial(Monomial::one(self.nvars()), c)
    }

    pub fn var(&self, i: usize) -> Poly {
        self.monomial(Monomial::var(self.nvars(), i), 1)
    }

    pub fn var_by_name(&self, name: &str) -> Option<Poly> {
        self.vars.iter().position(|v| v == name).map(|i| self.var(i))
    }

    pub fn monomial(&self, m: Monomial, c: Coeff) -> Poly {
        if c == 0 {
            self.zero()
        } else {
            Poly { ring: self.id, terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, Coeff)>) -> Poly {
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % self.field.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.field.add(last.1, c),
                _ => out.push((m, c)),
            }
            if out.last().is_some_and(|t| t.1 == 0) {
                out.pop();
            }
        }
        Poly { ring: self.id, terms: out }
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.degree(self.weights())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.axpy(a, 1, &Monomial::one(self.nvars()), b)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.axpy(a, self.field.neg(1), &Monomial::one(self.nvars()), b)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.scale(a, self.field.neg(1))
    }

    pub fn scale(&self, a: &Poly, c: Coeff) -> Poly {
        if c == 0 {
            return self.zero();
        }
        Poly {
            ring: self.id,
            terms: a.terms.iter().map(|(m, x)| (m.clone(), self.field.mul(*x, c))).collect(),
        }
    }

    pub fn mul_term(&self, a: &Poly, m: &Monomial, c: Coeff) -> Poly {
        if c == 0 {
            return self.zero();
        }
        Poly {
            ring: self.id,
            terms: a.terms.iter().map(|(t, x)| (t.mul(m), self.field.mul(*x, c))).collect(),
        }
    }

    /// `a + c*m*b`, by merging two sorted term lists.
    pub fn axpy(&self, a: &Poly, c: Coeff, m: &Monomial, b: &Poly) -> Poly {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut j = 0;
        let bt: Vec<(Monomial, Coeff)> = if c == 0 {
            Vec::new()
        } else {
            b.terms.iter().map(|(t, x)| (t.mul(m), f.mul(*x, c))).collect()
        };
        while i < a.terms.len() && j < bt.len() {
            match self.order.cmp(&a.terms[i].0, &bt[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f.add(a.terms[i].1, bt[j].1);
                    if s != 0 {
                        out.push((a.terms[i].0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend(bt.into_iter().skip(j));
        Poly { ring: self.id, terms: out }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), self.field.mul(*ca, *cb)));
            }
        }
        self.from_terms(terms)
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Checked arithmetic: both operands must belong to this ring.
    pub fn poly_arith(&self, a: &Poly, b: &Poly, op: ArithOp) -> Result<Poly> {
        if a.ring != self.id || b.ring != self.id {
            return Err(Error::MixedRings);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        })
    }

    pub fn belongs(&self, a: &Poly) -> bool {
        a.ring == self.id
    }

    /// Multivariate division. Returns quotients and a remainder none of whose
    /// terms is divisible by a leading monomial of the divisors.
    pub fn divide(&self, f: &Poly, divisors: &[Poly]) -> (Vec<Poly>, Poly) {
        let mut q = vec![self.zero(); divisors.len()];
        let mut rem = Vec::new();
        let mut p = f.clone();
        let one = Monomial::one(self.nvars());
        while let Some((lm, lc)) = p.terms.first().cloned() {
            let hit = divisors.iter().enumerate().find(|(_, d)| {
                d.lead().is_some_and(|(dm, _)| dm.divides(&lm))
            });
            match hit {
                Some((k, d)) => {
                    let (dm, dc) = d.lead().unwrap();
                    let t = dm.quotient_of(&lm);
                    let c = self.field.mul(lc, self.field.inv(*dc));
                    q[k] = self.axpy(&q[k], c, &t, &self.monomial(one.clone(), 1));
                    p = self.axpy(&p, self.field.neg(c), &t, d);
                }
                None => {
                    rem.push(p.terms.remove(0));
                }
            }
        }
        (q, Poly { ring: self.id, terms: rem })
    }

    pub fn is_homogeneous(&self, a: &Poly) -> bool {
        let mut degs = a.terms.iter().map(|(m, _)| self.degree_of(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Weighted degree of the leading term; `None` for zero.
    pub fn degree(&self, a: &Poly) -> Option<u32> {
        a.terms.first().map(|(m, _)| self.degree_of(m))
    }

    pub fn make_monic(&self, a: &Poly) -> Poly {
        match a.lead() {
            None => a.clone(),
            Some((_, c)) => self.scale(a, self.field.inv(*c)),
        }
    }

    pub fn display(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            let sc = self.field.to_signed(*c);
            let (neg, abs) = if sc < 0 { (true, -sc) } else { (false, sc) };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.display_monomial(m);
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs == 1 {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (v, &e) in self.vars.iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn lead(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }
    pub fn ring_id(&self) -> u64 {
        self.ring
    }
    /// Constant term coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn ring() -> PolyRing {
        PolyRing::standard(&["x", "y", "z"])
    }

    #[test]
    fn additive_inverse() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let s = r.poly_arith(&r.add(&x, &y), &r.neg(&x), ArithOp::Add).unwrap();
        assert_eq!(s, y);
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let p = r.mul(&r.add(&x, &y), &r.sub(&x, &y));
        assert_eq!(r.display(&p), "x^2 - y^2");
    }

    #[test]
    fn mixed_rings_rejected() {
        let r = ring();
        let s = PolyRing::standard(&["a", "b"]);
        assert!(matches!(r.poly_arith(&r.var(0), &s.var(0), ArithOp::Mul), Err(Error::MixedRings)));
    }

    #[test]
    fn division_examples() {
        let r = PolyRing::standard(&["x", "y"]);
        let x = r.var(0);
        let y = r.var(1);
        let (q, rem) = r.divide(&r.mul(&x, &x), std::slice::from_ref(&x));
        assert_eq!(q[0], x);
        assert!(rem.is_zero());
        let f = r.add(&r.mul(&x, &y), &r.mul(&y, &y));
        let (_, rem) = r.divide(&f, std::slice::from_ref(&x));
        assert_eq!(rem, r.mul(&y, &y));
    }

    fn arb_poly(r: PolyRing) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((proptest::collection::vec(0u16..4, 3), 0u32..32003), 0..6)
            .prop_map(move |ts| {
                r.from_terms(ts.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)).collect())
            })
    }

    proptest! {
        #[test]
        fn product_matches_dense_convolution(a in arb_poly(ring()), b in arb_poly(ring())) {
            let r = ring();
            let f = r.field();
            // dense oracle: indices over exponent triples with each exponent ≤ 6
            let mut dense: BTreeMap<Vec<u16>, u32> = BTreeMap::new();
            for (ma, ca) in a.terms() {
                for (mb, cb) in b.terms() {
                    let e: Vec<u16> = ma.exponents().iter().zip(mb.exponents()).map(|(p, q)| p + q).collect();
                    let slot = dense.entry(e).or_insert(0);
                    *slot = f.add(*slot, f.mul(*ca, *cb));
                }
            }
            dense.retain(|_, c| *c != 0);
            let p = r.mul(&a, &b);
            let got: BTreeMap<Vec<u16>, u32> = p.terms().iter().map(|(m, c)| (m.exponents().to_vec(), *c)).collect();
            prop_assert_eq!(got, dense);
            for w in p.terms().windows(2) {
                prop_assert_eq!(r.order().cmp(&w[0].0, &w[1].0), Ordering::Greater);
            }
        }

        #[test]
        fn division_reconstructs(f in arb_poly(ring()), ds in proptest::collection::vec(arb_poly(ring()), 1..4)) {
            let r = ring();
            let ds: Vec<Poly> = ds.into_iter().filter(|d| !d.is_zero()).collect();
            prop_assume!(!ds.is_empty());
            let (q, rem) = r.divide(&f, &ds);
            let mut back = rem.clone();
            for (qi, di) in q.iter().zip(&ds) {
                back = r.add(&back, &r.mul(qi, di));
            }
            prop_assert_eq!(back, f);
            for (m, _) in rem.terms() {
                for d in &ds {
                    prop_assert!(!d.lead().unwrap().0.divides(m));
                }
            }
        }

        #[test]
        fn homogeneity_preserved(a in arb_poly(ring()), b in arb_poly(ring())) {
            let r = ring();
            let ha = r.from_terms(a.terms().iter().filter(|(m, _)| r.degree_of(m) == 3).cloned().collect());
            let hb = r.from_terms(b.terms().iter().filter(|(m, _)| r.degree_of(m) == 3).cloned().collect());
            let hc = r.from_terms(b.terms().iter().filter(|(m, _)| r.degree_of(m) == 2).cloned().collect());
            prop_assert!(r.is_homogeneous(&r.add(&ha, &hb)));
            let p = r.mul(&ha, &hc);
            prop_assert!(r.is_homogeneous(&p));
            if !p.is_zero() {
                prop_assert_eq!(r.degree(&p), Some(5));
            }
        }
    }
}
