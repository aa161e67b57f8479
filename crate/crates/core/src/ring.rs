//! Graded quotient rings `R = S / I`.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{self, GroebnerBasis, DEFAULT_DEGREE_CAP};
use crate::hilbert;
use crate::poly::{Poly, PolyRing};
use crate::vector::{FreeModule, ModuleElement, Space};

#[derive(Debug)]
pub struct GradedRing {
    poly: Arc<PolyRing>,
    ideal: GroebnerBasis,
    ideal_polys: Vec<Poly>,
    degree_cap: u32,
    key: String,
    dim: OnceLock<usize>,
    depth: OnceLock<Result<usize>>,
    ambient: OnceLock<Arc<GradedRing>>,
}

impl GradedRing {
    pub fn new(poly: PolyRing, ideal: Vec<Poly>) -> Result<Arc<Self>> {
        Self::with_cap(Arc::new(poly), ideal, DEFAULT_DEGREE_CAP)
    }

    pub fn polynomial(poly: PolyRing) -> Arc<Self> {
        Self::new(poly, Vec::new()).expect("zero ideal")
    }

    pub fn with_cap(poly: Arc<PolyRing>, ideal: Vec<Poly>, degree_cap: u32) -> Result<Arc<Self>> {
        for p in &ideal {
            if !poly.belongs(p) {
                return Err(Error::MixedRings);
            }
        }
        let gb = groebner::ideal_groebner(&poly, &ideal, degree_cap)?;
        if gb.is_everything() {
            return Err(Error::Contract("defining ideal is the unit ideal".into()));
        }
        let space = gb.space();
        let ideal_polys: Vec<Poly> = gb.generators.iter().map(|g| space.component(g, 0)).collect();
        let key = Self::make_key(&poly, &ideal_polys);
        Ok(Arc::new(GradedRing {
            poly,
            ideal: gb,
            ideal_polys,
            degree_cap,
            key,
            dim: OnceLock::new(),
            depth: OnceLock::new(),
            ambient: OnceLock::new(),
        }))
    }

    fn make_key(poly: &PolyRing, ideal: &[Poly]) -> String {
        let mut s = format!(
            "char {}; vars {}; weights {:?}; order {}; ideal",
            poly.field().characteristic(),
            poly.vars().join(" "),
            poly.weights(),
            poly.order().kind.name()
        );
        for p in ideal {
            s.push_str(" | ");
            s.push_str(&poly.display(p));
        }
        s
    }

    /// Canonical textual description, used for hashing and cache keys.
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn poly(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    /// Reduced Gröbner basis of the defining ideal.
    pub fn ideal(&self) -> &GroebnerBasis {
        &self.ideal
    }

    pub fn ideal_generators(&self) -> &[Poly] {
        &self.ideal_polys
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.ideal_polys.is_empty()
    }

    /// The ambient polynomial ring `S` with the same degree cap.
    pub fn ambient(self: &Arc<Self>) -> Arc<GradedRing> {
        if self.is_polynomial_ring() {
            return self.clone();
        }
        self.ambient
            .get_or_init(|| GradedRing::with_cap(self.poly.clone(), Vec::new(), self.degree_cap).unwrap())
            .clone()
    }

    /// `I · F`: every ideal generator times every basis vector of `free`.
    pub fn ideal_lift(&self, free: &FreeModule) -> Vec<ModuleElement> {
        let space = Space::new(&self.poly, free);
        let mut out = Vec::with_capacity(free.rank() * self.ideal_polys.len());
        for i in 0..free.rank() {
            let e = space.unit(i);
            for f in &self.ideal_polys {
                out.push(space.mul_poly(f, &e));
            }
        }
        out
    }

    /// Componentwise normal form modulo `I`.
    pub fn reduce_vector(&self, free: &FreeModule, v: &ModuleElement) -> ModuleElement {
        if self.is_polynomial_ring() {
            return v.clone();
        }
        let space = Space::new(&self.poly, free);
        let lift = self.ideal_lift(free);
        groebner::reduce(space, &lift, v)
    }

    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        let space = self.ideal.space();
        let v = space.from_components(std::slice::from_ref(p));
        space.component(&self.ideal.normal_form(&v), 0)
    }

    /// Krull dimension, from the pole order of the Hilbert series at 1.
    pub fn dim(&self) -> usize {
        *self.dim.get_or_init(|| {
            let lead = self.ideal.leading_monomials(0);
            let num = hilbert::numerator(&lead, self.poly.weights());
            self.nvars() - hilbert::order_at_one(&num)
        })
    }

    /// Depth of `R` as a module over itself.
    pub fn depth(self: &Arc<Self>) -> Result<usize> {
        self.depth
            .get_or_init(|| {
                let r = crate::module::Presentation::free(self.clone(), vec![0]);
                crate::homology::depth(&r)
            })
            .clone()
    }

    pub fn is_cohen_macaulay(self: &Arc<Self>) -> Result<bool> {
        Ok(self.depth()? == self.dim())
    }
}

impl PartialEq for GradedRing {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.degree_cap == other.degree_cap
    }
}
impl Eq for GradedRing {}
