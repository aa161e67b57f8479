//! Elements of twisted free modules and the term-over-position order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::field::Coeff;
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyRing};

/// Twisted free module `⊕ R(-a_i)`: basis element `i` has degree `twists[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct FreeModule {
    pub twists: Vec<i32>,
}

impl FreeModule {
    pub fn new(twists: Vec<i32>) -> Self {
        FreeModule { twists }
    }
    pub fn rank(&self) -> usize {
        self.twists.len()
    }
    pub fn zero() -> Self {
        FreeModule { twists: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mon: Monomial,
    pub comp: u32,
    pub coef: Coeff,
}

/// Sparse vector; terms sorted strictly descending in the module order of
/// the free module it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModuleElement {
    terms: Vec<Term>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        ModuleElement { terms: Vec::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub(crate) fn from_sorted(terms: Vec<Term>) -> Self {
        ModuleElement { terms }
    }
    pub(crate) fn into_terms(self) -> Vec<Term> {
        self.terms
    }
}

/// A ring plus the twists of a free module: everything needed to order terms.
#[derive(Clone, Copy)]
pub struct Space<'a> {
    pub ring: &'a PolyRing,
    pub twists: &'a [i32],
}

impl<'a> Space<'a> {
    pub fn new(ring: &'a PolyRing, free: &'a FreeModule) -> Self {
        Space { ring, twists: &free.twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    #[inline]
    pub fn term_degree(&self, t: &Term) -> i32 {
        t.mon.degree(self.ring.weights()) as i32 + self.twists[t.comp as usize]
    }

    /// Term over position: total degree, then the monomial order, then lower index first.
    #[inline]
    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        self.term_degree(a)
            .cmp(&self.term_degree(b))
            .then_with(|| self.ring.order().cmp(&a.mon, &b.mon))
            .then_with(|| b.comp.cmp(&a.comp))
    }

    pub fn unit(&self, i: usize) -> ModuleElement {
        ModuleElement {
            terms: vec![Term { mon: Monomial::one(self.ring.nvars()), comp: i as u32, coef: 1 }],
        }
    }

    pub fn from_terms(&self, mut terms: Vec<Term>) -> ModuleElement {
        let f = self.ring.field();
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.comp == t.comp && last.mon == t.mon => {
                    last.coef = f.add(last.coef, t.coef)
                }
                _ => out.push(t),
            }
            if out.last().is_some_and(|t| t.coef == 0) {
                out.pop();
            }
        }
        ModuleElement { terms: out }
    }

    pub fn from_components(&self, comps: &[Poly]) -> ModuleElement {
        let mut terms = Vec::new();
        for (i, p) in comps.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term { mon: m.clone(), comp: i as u32, coef: *c });
            }
        }
        self.from_terms(terms)
    }

    pub fn component(&self, e: &ModuleElement, i: usize) -> Poly {
        let terms = e
            .terms
            .iter()
            .filter(|t| t.comp as usize == i)
            .map(|t| (t.mon.clone(), t.coef))
            .collect();
        self.ring.from_terms(terms)
    }

    pub fn components(&self, e: &ModuleElement) -> Vec<Poly> {
        (0..self.rank()).map(|i| self.component(e, i)).collect()
    }

    /// Degree of a homogeneous element; `None` for zero, `Err` if not homogeneous.
    pub fn degree(&self, e: &ModuleElement) -> Result<Option<i32>, ()> {
        let mut it = e.terms.iter().map(|t| self.term_degree(t));
        match it.next() {
            None => Ok(None),
            Some(d) => {
                if it.all(|x| x == d) {
                    Ok(Some(d))
                } else {
                    Err(())
                }
            }
        }
    }

    pub fn is_homogeneous(&self, e: &ModuleElement) -> bool {
        self.degree(e).is_ok()
    }

    /// `a + c*m*b`.
    pub fn axpy(&self, a: &[Term], c: Coeff, m: &Monomial, b: &[Term]) -> Vec<Term> {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        if c == 0 {
            out.extend_from_slice(a);
            return out;
        }
        let mut i = 0;
        let mut bi = b.iter().map(|t| Term { mon: t.mon.mul(m), comp: t.comp, coef: f.mul(t.coef, c) });
        let mut next_b = bi.next();
        while i < a.len() {
            let Some(tb) = next_b.as_ref() else { break };
            match self.cmp_terms(&a[i], tb) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(next_b.take().unwrap());
                    next_b = bi.next();
                }
                Ordering::Equal => {
                    let s = f.add(a[i].coef, tb.coef);
                    if s != 0 {
                        out.push(Term { mon: a[i].mon.clone(), comp: a[i].comp, coef: s });
                    }
                    i += 1;
                    next_b = bi.next();
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        if let Some(t) = next_b {
            out.push(t);
        }
        out.extend(bi);
        out
    }

    pub fn add(&self, a: &ModuleElement, b: &ModuleElement) -> ModuleElement {
        let one = Monomial::one(self.ring.nvars());
        ModuleElement { terms: self.axpy(&a.terms, 1, &one, &b.terms) }
    }

    pub fn sub(&self, a: &ModuleElement, b: &ModuleElement) -> ModuleElement {
        let one = Monomial::one(self.ring.nvars());
        let m1 = self.ring.field().neg(1);
        ModuleElement { terms: self.axpy(&a.terms, m1, &one, &b.terms) }
    }

    pub fn scale(&self, a: &ModuleElement, c: Coeff) -> ModuleElement {
        if c == 0 {
            return ModuleElement::zero();
        }
        let f = self.ring.field();
        ModuleElement {
            terms: a
                .terms
                .iter()
                .map(|t| Term { mon: t.mon.clone(), comp: t.comp, coef: f.mul(t.coef, c) })
                .collect(),
        }
    }

    pub fn mul_term(&self, a: &ModuleElement, m: &Monomial, c: Coeff) -> ModuleElement {
        if c == 0 {
            return ModuleElement::zero();
        }
        let f = self.ring.field();
        ModuleElement {
            terms: a
                .terms
                .iter()
                .map(|t| Term { mon: t.mon.mul(m), comp: t.comp, coef: f.mul(t.coef, c) })
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly, a: &ModuleElement) -> ModuleElement {
        let mut acc: Vec<Term> = Vec::new();
        for (m, c) in p.terms() {
            acc = self.axpy(&acc, *c, m, &a.terms);
        }
        ModuleElement { terms: acc }
    }

    /// `Σ coeffs[j] * cols[j]`.
    pub fn combine(&self, coeffs: &[Poly], cols: &[ModuleElement]) -> ModuleElement {
        let mut acc = ModuleElement::zero();
        for (p, v) in coeffs.iter().zip(cols) {
            if !p.is_zero() {
                acc = self.add(&acc, &self.mul_poly(p, v));
            }
        }
        acc
    }

    /// The image of `v` (an element of a free module with `cols.len()` generators)
    /// under the map sending basis vector `j` to `cols[j]`.
    pub fn apply(&self, cols: &[ModuleElement], v: &ModuleElement) -> ModuleElement {
        let mut acc: Vec<Term> = Vec::new();
        for t in &v.terms {
            acc = self.axpy(&acc, t.coef, &t.mon, &cols[t.comp as usize].terms);
        }
        ModuleElement { terms: acc }
    }

    /// Re-sorts an element whose terms were built for another space.
    pub fn normalize(&self, e: ModuleElement) -> ModuleElement {
        self.from_terms(e.terms)
    }

    pub fn make_monic(&self, a: &ModuleElement) -> ModuleElement {
        match a.lead() {
            None => a.clone(),
            Some(t) => self.scale(a, self.ring.field().inv(t.coef)),
        }
    }

    pub fn display(&self, e: &ModuleElement) -> String {
        let comps: Vec<String> = self.components(e).iter().map(|p| self.ring.display(p)).collect();
        format!("[{}]", comps.join(", "))
    }
}
