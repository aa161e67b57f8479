//! Semidualizing modules and the operators built on them: `(-)^C`, `σ^C`,
//! `Tr_C`, `Ω`, `λ = Ω Tr`, `T_n^C = Tr_C Ω^{n-1}`, Auslander class tests.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cert::{CertStatus, Graded};
use crate::error::{Error, Result};
use crate::homology::{ext, resolve, tor};
use crate::module::{self, cokernel, hom_module, kernel, tensor, HomModule, ModuleMap, Presentation};
use crate::ring::GradedRing;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "snake_case")]
pub enum DualizerKind {
    /// `C = R`.
    Ring,
    /// The canonical module of a Cohen-Macaulay ring.
    Canonical,
    /// A user-supplied candidate.
    Module(String),
}

/// A module `C` together with the record of its semidualizing test.
#[derive(Clone, Debug)]
pub struct SemidualizingHandle {
    kind: DualizerKind,
    module: Arc<Presentation>,
    homothety_iso: bool,
    checked_through: usize,
    status: CertStatus,
    dualizing: bool,
}

impl SemidualizingHandle {
    /// `R` itself; dualizing exactly when `R` is Gorenstein.
    pub fn ring(r: &Arc<GradedRing>) -> Result<Self> {
        Ok(SemidualizingHandle {
            kind: DualizerKind::Ring,
            module: Arc::new(Presentation::free(r.clone(), vec![0])),
            homothety_iso: true,
            checked_through: usize::MAX,
            status: CertStatus::Certified,
            dualizing: is_gorenstein(r)?,
        })
    }

    /// The canonical module, verified with the default bound.
    pub fn canonical(r: &Arc<GradedRing>) -> Result<Self> {
        let w = canonical_module(r)?;
        let bound = r.depth()?.max(1);
        verify_semidualizing(&w, DualizerKind::Canonical, bound)
    }

    pub fn kind(&self) -> &DualizerKind {
        &self.kind
    }
    pub fn module(&self) -> &Arc<Presentation> {
        &self.module
    }
    pub fn ring_of(&self) -> &Arc<GradedRing> {
        self.module.ring()
    }
    pub fn homothety_iso(&self) -> bool {
        self.homothety_iso
    }
    pub fn checked_through(&self) -> usize {
        self.checked_through
    }
    pub fn status(&self) -> &CertStatus {
        &self.status
    }
    /// Finite injective dimension is known (canonical module of a CM ring,
    /// or `R` Gorenstein).
    pub fn is_dualizing(&self) -> bool {
        self.dualizing
    }
    pub fn is_verified(&self) -> bool {
        !self.status.is_failed()
    }
    pub fn is_ring(&self) -> bool {
        self.kind == DualizerKind::Ring
    }

    pub fn require_verified(&self) -> Result<()> {
        match &self.status {
            CertStatus::Failed(w) => Err(Error::UnverifiedDualizer(w.clone())),
            _ => Ok(()),
        }
    }

    /// Default scan bound for "all i > 0" conditions against this module.
    pub fn default_bound(&self) -> Result<usize> {
        let d = self.ring_of().depth()?;
        Ok(if self.dualizing { d.max(1) } else { d + 4 })
    }

    pub fn label(&self) -> String {
        match &self.kind {
            DualizerKind::Ring => "R".into(),
            DualizerKind::Canonical => "canonical".into(),
            DualizerKind::Module(n) => n.clone(),
        }
    }
}

fn same_ring(m: &Presentation, c: &SemidualizingHandle) -> Result<()> {
    if **m.ring() != **c.ring_of() {
        return Err(Error::MixedRings);
    }
    Ok(())
}

/// Homothety `R -> Hom(C, C)`, `1 ↦ id_C`.
pub fn homothety(c: &Arc<Presentation>) -> Result<(ModuleMap, HomModule)> {
    let ring = c.ring().clone();
    let h = hom_module(c, c)?;
    let space = c.space();
    let id: Vec<_> = (0..c.rank()).map(|i| space.unit(i)).collect();
    let v = h.coordinates(&id)?;
    let r = Arc::new(Presentation::free(ring, vec![0]));
    let f = ModuleMap::new(r, Arc::new(h.module.clone()), vec![v])?;
    Ok((f, h))
}

/// Semidualizing test: homothety iso and `Ext^i(C, C) = 0` for `1 <= i <= bound`.
pub fn verify_semidualizing(c: &Presentation, kind: DualizerKind, bound: usize) -> Result<SemidualizingHandle> {
    if c.is_zero()? {
        return Err(Error::ZeroModule("semidualizing candidate is zero".into()));
    }
    let bound = bound.max(1);
    let ring = c.ring().clone();
    let cm = Arc::new(c.minimal()?);
    let mut handle = SemidualizingHandle {
        kind: kind.clone(),
        module: cm.clone(),
        homothety_iso: false,
        checked_through: 0,
        status: CertStatus::Certified,
        dualizing: false,
    };
    let (f, _) = homothety(&cm)?;
    let (k, _) = kernel(&f)?;
    if !k.is_zero()? {
        let hf = k.hilbert_range(0, 4)?;
        handle.status = CertStatus::Failed(format!(
            "homothety R -> Hom(C,C) is not injective; kernel has Hilbert function {hf:?} in degrees 0..4"
        ));
        return Ok(handle);
    }
    let q = cokernel(&f)?.module;
    if !q.is_zero()? {
        let lo = q.min_generator_degree().unwrap_or(0);
        handle.status = CertStatus::Failed(format!(
            "homothety R -> Hom(C,C) is not surjective; cokernel generated in degrees {:?} (from {lo})",
            q.cover().twists
        ));
        return Ok(handle);
    }
    handle.homothety_iso = true;
    for i in 1..=bound {
        let e = ext(i, &cm, &cm)?;
        if !e.is_zero()? {
            handle.status = CertStatus::Failed(format!("Ext^{i}(C,C) is nonzero"));
            handle.checked_through = i;
            return Ok(handle);
        }
    }
    handle.checked_through = bound;
    let cm_ring = ring.is_cohen_macaulay()?;
    handle.dualizing = match kind {
        DualizerKind::Canonical => cm_ring,
        DualizerKind::Ring => is_gorenstein(&ring)?,
        DualizerKind::Module(_) => false,
    };
    let finite_pd = resolve(&cm, bound + 1)?.length().is_some_and(|l| l <= bound);
    let depth = ring.depth()?;
    handle.status = if (handle.dualizing && bound >= depth) || kind == DualizerKind::Ring || finite_pd {
        CertStatus::Certified
    } else {
        CertStatus::BoundedEvidence(bound)
    };
    Ok(handle)
}

/// `ω_R = Ext_S^{n-d}(R, S(-Σw))`, viewed over `R`.
pub fn canonical_module(r: &Arc<GradedRing>) -> Result<Presentation> {
    let depth = r.depth()?;
    let dim = r.dim();
    if depth != dim {
        return Err(Error::NotCohenMacaulay { depth, dim });
    }
    let s = r.ambient();
    let codim = r.nvars() - dim;
    let rs = Presentation::cyclic(s.clone(), r.ideal_generators())?;
    let shift: i32 = r.poly().weights().iter().map(|&w| w as i32).sum();
    let e = ext(codim, &rs, &Presentation::free(s, vec![shift]))?;
    Presentation::new(r.clone(), e.cover().clone(), e.relations().to_vec())?.minimal()
}

/// Cohen-Macaulay with cyclic canonical module.
pub fn is_gorenstein(r: &Arc<GradedRing>) -> Result<bool> {
    if !r.is_cohen_macaulay()? {
        return Ok(false);
    }
    Ok(canonical_module(r)?.rank() == 1)
}

/// `M^C = Hom(M, C)`.
pub fn dual_c(m: &Presentation, c: &SemidualizingHandle) -> Result<Presentation> {
    c.require_verified()?;
    same_ring(m, c)?;
    Ok(hom_module(&Arc::new(m.minimal()?), c.module())?.module)
}

/// `σ^C_M : M -> M^{CC}` on covers, with the two Hom modules it lives between.
#[derive(Clone, Debug)]
pub struct Biduality {
    pub map: ModuleMap,
    pub dual: HomModule,
    pub bidual: HomModule,
}

impl Biduality {
    pub fn kernel(&self) -> Result<Presentation> {
        Ok(kernel(&self.map)?.0)
    }
    pub fn cokernel(&self) -> Result<Presentation> {
        Ok(cokernel(&self.map)?.module)
    }
    pub fn is_iso(&self) -> Result<bool> {
        Ok(self.kernel()?.is_zero()? && self.cokernel()?.is_zero()?)
    }
}

pub fn biduality_map(m: &Presentation, c: &SemidualizingHandle) -> Result<Biduality> {
    c.require_verified()?;
    same_ring(m, c)?;
    let mm = Arc::new(m.minimal()?);
    let dual = hom_module(&mm, c.module())?;
    let dm = Arc::new(dual.module.clone());
    let bidual = hom_module(&dm, c.module())?;
    let gens: Vec<_> = (0..dual.generators.len()).map(|j| dual.generator_map(j)).collect();
    let mut cols = Vec::with_capacity(mm.rank());
    for k in 0..mm.rank() {
        // e_k ↦ (h_j ↦ h_j(e_k))
        let images: Vec<_> = gens.iter().map(|g| g.columns[k].clone()).collect();
        cols.push(bidual.coordinates(&images)?);
    }
    let map = ModuleMap::new(mm, Arc::new(bidual.module.clone()), cols)?;
    Ok(Biduality { map, dual, bidual })
}

/// `coker(f^C)` for the minimal presentation `f` of `M`, before minimalization.
/// Cover: `Hom(F_1, C)`; relations: images of `Hom(F_0, C)` then relations of
/// `C` in each block, matching the layout of `tensor(Tr M, C)`.
pub fn transpose_against_raw(m: &Presentation, c: &Presentation) -> Result<Presentation> {
    let ring = m.ring().clone();
    let poly = ring.poly();
    let mm = m.minimal()?;
    let phi = mm.relation_map();
    let (big1, rels1) = module::hom_free(poly, &phi.source, c);
    let mut rels = module::hom_free_map(poly, &phi, c, &big1);
    rels.extend(rels1);
    Presentation::new(ring, big1, rels)
}

pub fn transpose_c_raw(m: &Presentation, c: &SemidualizingHandle) -> Result<Presentation> {
    c.require_verified()?;
    same_ring(m, c)?;
    transpose_against_raw(m, c.module())
}

/// `Tr_C M`, minimally presented.
pub fn transpose_c(m: &Presentation, c: &SemidualizingHandle) -> Result<Presentation> {
    transpose_c_raw(m, c)?.minimal()
}

/// The classical transpose `Tr M`.
pub fn transpose(m: &Presentation) -> Result<Presentation> {
    let r = Presentation::free(m.ring().clone(), vec![0]);
    transpose_against_raw(m, &r)?.minimal()
}

/// `Ω^k M` from the minimal resolution.
pub fn syzygy(m: &Presentation, k: usize) -> Result<Presentation> {
    if k == 0 {
        return m.minimal();
    }
    let res = resolve(m, k + 1)?;
    match res.free(k) {
        None => Ok(Presentation::zero(m.ring().clone())),
        Some(fk) => {
            let rels = res.maps.get(k).map(|p| p.columns.clone()).unwrap_or_default();
            Presentation::new(m.ring().clone(), fk.clone(), rels)
        }
    }
}

/// `λ M = Ω Tr M`.
pub fn lambda(m: &Presentation) -> Result<Presentation> {
    syzygy(&transpose(m)?, 1)
}

/// `T_n^C M = Tr_C Ω^{n-1} M`.
pub fn t_n_c(m: &Presentation, n: usize, c: &SemidualizingHandle) -> Result<Presentation> {
    if n == 0 {
        return Err(Error::Contract("T_n^C needs n >= 1".into()));
    }
    transpose_c(&syzygy(m, n - 1)?, c)
}

/// `M` embeds in some `P ⊗ C`, tested as injectivity of `σ^C_M`.
pub fn is_c_syzygy(m: &Presentation, c: &SemidualizingHandle) -> Result<Graded<bool>> {
    let k = biduality_map(m, c)?.kernel()?;
    if k.is_zero()? {
        return Ok(Graded::certified(true));
    }
    let lo = k.min_generator_degree().unwrap_or(0);
    Ok(Graded::certified(false).with_witness(format!("ker σ^C_M is nonzero from degree {lo}")))
}

/// `Ext^i(Tr_C M, C) = 0` for `1 <= i <= k`.
pub fn c_k_torsionless(m: &Presentation, c: &SemidualizingHandle, k: usize) -> Result<Graded<bool>> {
    if k == 0 {
        return Ok(Graded::certified(true));
    }
    let tr = transpose_c(m, c)?;
    for i in 1..=k {
        if !ext(i, &tr, c.module())?.is_zero()? {
            return Ok(Graded::certified(false).with_witness(format!("Ext^{i}(Tr_C M, C) is nonzero")));
        }
    }
    Ok(Graded::certified(true))
}

/// `μ: M -> Hom(C, M ⊗ C)`, `x ↦ (c ↦ x ⊗ c)`, together with `M ⊗ C`.
pub fn mu_map(m: &Presentation, c: &SemidualizingHandle) -> Result<(ModuleMap, Presentation)> {
    same_ring(m, c)?;
    let mm = Arc::new(m.minimal()?);
    let cm = c.module();
    let g = cm.rank();
    let t = tensor(&mm, cm)?.minimalize()?;
    let tm = Arc::new(t.module.clone());
    let h = hom_module(cm, &tm)?;
    let mut cols = Vec::with_capacity(mm.rank());
    for i in 0..mm.rank() {
        let images: Vec<_> = (0..g).map(|l| t.to_new[i * g + l].clone()).collect();
        cols.push(h.coordinates(&images)?);
    }
    let f = ModuleMap::new(mm, Arc::new(h.module.clone()), cols)?;
    Ok((f, t.module))
}

/// Auslander class membership, scanning Tor and Ext through `bound`.
pub fn auslander_class(m: &Presentation, c: &SemidualizingHandle, bound: usize) -> Result<Graded<bool>> {
    c.require_verified()?;
    same_ring(m, c)?;
    if c.is_ring() {
        return Ok(Graded::certified(true));
    }
    let ring = m.ring();
    let depth = ring.depth()?;
    if m.is_zero()? || resolve(m, depth + 1)?.length().is_some() {
        return Ok(Graded::certified(true).with_witness("finite projective dimension"));
    }
    let (mu, t) = mu_map(m, c)?;
    if !kernel(&mu)?.0.is_zero()? {
        return Ok(Graded::certified(false).with_witness("mu: M -> Hom(C, M⊗C) is not injective"));
    }
    if !cokernel(&mu)?.module.is_zero()? {
        return Ok(Graded::certified(false).with_witness("mu: M -> Hom(C, M⊗C) is not surjective"));
    }
    for i in 1..=bound {
        if !tor(i, c.module(), m)?.is_zero()? {
            return Ok(Graded::certified(false).with_witness(format!("Tor_{i}(C, M) is nonzero")));
        }
        if !ext(i, c.module(), &t)?.is_zero()? {
            return Ok(Graded::certified(false).with_witness(format!("Ext^{i}(C, M⊗C) is nonzero")));
        }
    }
    let status = if c.is_dualizing() && bound >= depth + ring.dim() {
        CertStatus::Certified
    } else {
        CertStatus::BoundedEvidence(bound)
    };
    Ok(Graded::new(true, status))
}

/// Default scan bound for Auslander class tests.
pub fn auslander_bound(c: &SemidualizingHandle) -> Result<usize> {
    let r = c.ring_of();
    Ok(if c.is_dualizing() { r.depth()? + r.dim() } else { r.depth()? + 4 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::monomial::OrderKind;
    use crate::poly::{Poly, PolyRing};

    fn ring(vars: &[&str], ideal: &[&str]) -> Arc<GradedRing> {
        let p = PolyRing::standard(vars);
        let gens: Vec<Poly> = ideal.iter().map(|g| p.parse(g).unwrap()).collect();
        GradedRing::new(p, gens).unwrap()
    }

    fn semigroup() -> Arc<GradedRing> {
        let p = PolyRing::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![3, 4, 5],
            PrimeField::default(),
            OrderKind::DegRevLex,
        )
        .unwrap();
        let gens: Vec<Poly> = ["b^2 - a*c", "c^2 - a^2*b", "b*c - a^3"].iter().map(|g| p.parse(g).unwrap()).collect();
        GradedRing::new(p, gens).unwrap()
    }

    fn cyclic(r: &Arc<GradedRing>, gens: &[&str]) -> Presentation {
        let ps: Vec<Poly> = gens.iter().map(|g| r.poly().parse(g).unwrap()).collect();
        Presentation::cyclic(r.clone(), &ps).unwrap()
    }

    #[test]
    fn residue_field_of_dual_numbers_is_not_semidualizing() {
        let r = ring(&["x"], &["x^2"]);
        let h = verify_semidualizing(&cyclic(&r, &["x"]), DualizerKind::Module("k".into()), 2).unwrap();
        assert!(!h.is_verified());
        assert!(!h.homothety_iso());
        match h.status() {
            CertStatus::Failed(w) => assert!(w.contains("not injective"), "{w}"),
            s => panic!("unexpected {s}"),
        }
        assert!(h.require_verified().is_err());
    }

    #[test]
    fn ring_is_semidualizing() {
        let r = ring(&["x", "y"], &["x*y"]);
        let h = verify_semidualizing(&Presentation::free(r.clone(), vec![0]), DualizerKind::Ring, 3).unwrap();
        assert!(h.status().is_certified());
        assert!(h.is_dualizing());
    }

    #[test]
    fn canonical_module_of_semigroup_ring() {
        let t = semigroup();
        assert!(!is_gorenstein(&t).unwrap());
        let w = canonical_module(&t).unwrap();
        assert_eq!(w.rank(), 2);
        let h = SemidualizingHandle::canonical(&t).unwrap();
        assert!(h.status().is_certified(), "{}", h.status());
        assert!(h.is_dualizing());
        let s = ring(&["x", "y", "z"], &[]);
        let ws = canonical_module(&s).unwrap();
        assert_eq!(ws.cover().twists, vec![3]);
        assert!(ws.relations().is_empty());
    }

    #[test]
    fn transpose_of_residue_field() {
        let r = ring(&["x"], &["x^2"]);
        let k = cyclic(&r, &["x"]);
        let tr = transpose(&k).unwrap();
        assert_eq!(tr.rank(), 1);
        assert_eq!(tr.hilbert_range(-2, 3).unwrap().iter().sum::<i64>(), 1);
        let l = lambda(&k).unwrap();
        let bl = resolve(&l, 4).unwrap().betti_numbers();
        let bk = resolve(&k, 4).unwrap().betti_numbers();
        assert_eq!(bl, bk);
    }

    #[test]
    fn transpose_c_matches_tensor() {
        let t = semigroup();
        let h = SemidualizingHandle::canonical(&t).unwrap();
        let k = cyclic(&t, &["a", "b", "c"]);
        let raw = transpose_c_raw(&k, &h).unwrap();
        let r = Presentation::free(t.clone(), vec![0]);
        let tr = transpose_against_raw(&k, &r).unwrap();
        let prod = tensor(&tr, h.module()).unwrap();
        assert_eq!(raw.cover(), prod.cover());
        let a = raw.hilbert_range(-12, 12).unwrap();
        let b = prod.hilbert_range(-12, 12).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn c_syzygy_of_residue_field() {
        let r = ring(&["x"], &["x^2"]);
        let h = SemidualizingHandle::ring(&r).unwrap();
        let k = cyclic(&r, &["x"]);
        assert!(is_c_syzygy(&k, &h).unwrap().value);
        assert!(c_k_torsionless(&k, &h, 3).unwrap().value);
        let s = ring(&["x", "y"], &[]);
        let hs = SemidualizingHandle::ring(&s).unwrap();
        let ks = cyclic(&s, &["x", "y"]);
        assert!(!is_c_syzygy(&ks, &hs).unwrap().value);
    }

    #[test]
    fn auslander_class_over_semigroup_ring() {
        let t = semigroup();
        let h = SemidualizingHandle::canonical(&t).unwrap();
        let r = Presentation::free(t.clone(), vec![0]);
        assert!(auslander_class(&r, &h, 2).unwrap().value);
    }
}
