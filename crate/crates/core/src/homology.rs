//! Minimal graded free resolutions, Ext, Tor and depth.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groebner;
use crate::matrix::GradedMap;
use crate::module::{self, Presentation};
use crate::monomial::Monomial;
use crate::ring::GradedRing;
use crate::vector::{FreeModule, ModuleElement, Space, Term};

/// `... -> F_2 -> F_1 -> F_0 -> M -> 0`, with `maps[i]: F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Minimal presentation of the resolved module.
    pub module: Presentation,
    pub frees: Vec<FreeModule>,
    pub maps: Vec<GradedMap>,
    /// True when the resolution is known to stop at `F_{maps.len()}`.
    pub complete: bool,
}

impl Resolution {
    pub fn free(&self, i: usize) -> Option<&FreeModule> {
        self.frees.get(i)
    }

    /// Projective dimension, if the resolution is known to be finite.
    pub fn length(&self) -> Option<usize> {
        if self.complete {
            Some(self.maps.len())
        } else {
            None
        }
    }

    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| !m.has_unit_entry())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.frees.iter().map(|f| f.rank()).collect()
    }

    /// Homological degree -> (twist -> multiplicity).
    pub fn betti_table(&self) -> Vec<BTreeMap<i32, usize>> {
        self.frees
            .iter()
            .map(|f| {
                let mut row = BTreeMap::new();
                for &t in &f.twists {
                    *row.entry(t).or_insert(0) += 1;
                }
                row
            })
            .collect()
    }

    fn truncated(&self, length: usize) -> Resolution {
        if self.maps.len() <= length {
            return self.clone();
        }
        Resolution {
            module: self.module.clone(),
            frees: self.frees[..=length].to_vec(),
            maps: self.maps[..length].to_vec(),
            complete: false,
        }
    }
}

/// Serialized resolution for external caches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredResolution {
    pub frees: Vec<Vec<i32>>,
    /// Per map, per column: `(exponents, component, coefficient)` terms.
    pub maps: Vec<Vec<Vec<(Vec<u16>, u32, u32)>>>,
    pub complete: bool,
}

/// Persistent cache for resolutions, keyed by a content hash.
pub trait ResolutionStore: Send + Sync {
    fn load(&self, key: &str) -> Option<StoredResolution>;
    fn save(&self, key: &str, value: &StoredResolution);
}

fn memory() -> &'static Mutex<HashMap<String, Arc<Resolution>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Resolution>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn store_slot() -> &'static RwLock<Option<Arc<dyn ResolutionStore>>> {
    static STORE: OnceLock<RwLock<Option<Arc<dyn ResolutionStore>>>> = OnceLock::new();
    STORE.get_or_init(|| RwLock::new(None))
}

/// Installs (or removes) the persistent resolution store.
pub fn set_store(store: Option<Arc<dyn ResolutionStore>>) {
    *store_slot().write().unwrap() = store;
}

/// Drops the in-memory resolution cache.
pub fn clear_memory_cache() {
    memory().lock().unwrap().clear();
}

/// Content hash of a presentation together with the degree cap.
pub fn content_hash(m: &Presentation) -> String {
    let mut h = Sha256::new();
    h.update(m.key().as_bytes());
    h.update(format!("cap {}", m.ring().degree_cap()).as_bytes());
    hex::encode(h.finalize())
}

fn to_stored(r: &Resolution) -> StoredResolution {
    StoredResolution {
        frees: r.frees.iter().map(|f| f.twists.clone()).collect(),
        maps: r
            .maps
            .iter()
            .map(|m| {
                m.columns
                    .iter()
                    .map(|c| c.terms().iter().map(|t| (t.mon.exponents().to_vec(), t.comp, t.coef)).collect())
                    .collect()
            })
            .collect(),
        complete: r.complete,
    }
}

fn from_stored(module: Presentation, s: &StoredResolution) -> Option<Resolution> {
    let poly = module.poly().clone();
    if s.frees.len() != s.maps.len() + 1 || s.frees.first()? != &module.cover().twists {
        return None;
    }
    let frees: Vec<FreeModule> = s.frees.iter().map(|t| FreeModule::new(t.clone())).collect();
    let mut maps = Vec::with_capacity(s.maps.len());
    for (i, cols) in s.maps.iter().enumerate() {
        let target = &frees[i];
        let source = &frees[i + 1];
        if cols.len() != source.rank() {
            return None;
        }
        let space = Space::new(&poly, target);
        let mut out = Vec::with_capacity(cols.len());
        for c in cols {
            let mut terms = Vec::with_capacity(c.len());
            for (e, comp, coef) in c {
                if e.len() != poly.nvars() || *comp as usize >= target.rank() {
                    return None;
                }
                terms.push(Term { mon: Monomial::from_exponents(e), comp: *comp, coef: *coef });
            }
            out.push(space.from_terms(terms));
        }
        maps.push(GradedMap::new(source.clone(), target.clone(), out));
    }
    Some(Resolution { module, frees, maps, complete: s.complete })
}

/// Minimal generators of `ker(phi)` over the ring, reduced modulo `I`.
fn kernel_generators(ring: &Arc<GradedRing>, phi: &GradedMap) -> Result<Vec<ModuleElement>> {
    let poly = ring.poly();
    let cap = ring.degree_cap();
    let modulo = ring.ideal_lift(&phi.target);
    let cands = groebner::relations_modulo(poly, &phi.target, &phi.columns, &phi.source.twists, &modulo, cap)?;
    let base = ring.ideal_lift(&phi.source);
    let keep = groebner::select_minimal(poly, &phi.source, &cands, &base, cap)?;
    let space = Space::new(poly, &phi.source);
    Ok(keep.into_iter().map(|k| space.make_monic(&ring.reduce_vector(&phi.source, &cands[k]))).collect())
}

fn extend(res: &mut Resolution, length: usize) -> Result<()> {
    let ring = res.module.ring().clone();
    if res.maps.is_empty() && !res.complete && length >= 1 {
        let rel = res.module.relation_map();
        if rel.columns.is_empty() {
            res.complete = true;
        } else {
            res.frees.push(rel.source.clone());
            res.maps.push(rel);
        }
    }
    while !res.complete && res.maps.len() < length {
        let last = res.maps.last().unwrap();
        let gens = kernel_generators(&ring, last)?;
        if gens.is_empty() {
            res.complete = true;
            break;
        }
        let space = Space::new(ring.poly(), &last.source);
        let twists: Vec<i32> = gens.iter().map(|g| space.degree(g).unwrap().unwrap()).collect();
        let source = FreeModule::new(twists);
        let map = GradedMap::new(source.clone(), last.source.clone(), gens);
        res.frees.push(source);
        res.maps.push(map);
    }
    Ok(())
}

/// Minimal graded free resolution through `F_length` (shorter if it stops).
pub fn resolve(m: &Presentation, length: usize) -> Result<Resolution> {
    let key = content_hash(m);
    if let Some(r) = memory().lock().unwrap().get(&key) {
        if r.complete || r.maps.len() >= length {
            return Ok(r.truncated(length));
        }
    }
    let store = store_slot().read().unwrap().clone();
    let mut res = None;
    if let Some(r) = memory().lock().unwrap().get(&key) {
        res = Some((**r).clone());
    }
    let min = m.minimal()?;
    if res.is_none() {
        if let Some(s) = store.as_ref().and_then(|s| s.load(&key)) {
            res = from_stored(min.clone(), &s);
        }
    }
    let mut res = res.unwrap_or_else(|| Resolution {
        module: min.clone(),
        frees: vec![min.cover().clone()],
        maps: Vec::new(),
        complete: false,
    });
    let before = (res.maps.len(), res.complete);
    extend(&mut res, length)?;
    if (res.maps.len(), res.complete) != before {
        if let Some(s) = store.as_ref() {
            s.save(&key, &to_stored(&res));
        }
    }
    let out = res.truncated(length);
    memory().lock().unwrap().insert(key, Arc::new(res));
    Ok(out)
}

fn minimal_target(n: &Presentation) -> Result<Presentation> {
    if n.is_minimal() {
        Ok(n.clone())
    } else {
        n.minimal()
    }
}

/// `Ext^i_R(M, N)`, minimalized.
pub fn ext(i: usize, m: &Presentation, n: &Presentation) -> Result<Presentation> {
    if **m.ring() != **n.ring() {
        return Err(Error::MixedRings);
    }
    let ring = m.ring().clone();
    let poly = ring.poly();
    let n = minimal_target(n)?;
    let res = resolve(m, i + 1)?;
    let Some(fi) = res.free(i) else {
        return Ok(Presentation::zero(ring));
    };
    if fi.rank() == 0 || n.rank() == 0 {
        return Ok(Presentation::zero(ring));
    }
    let (big_i, rels_i) = module::hom_free(poly, fi, &n);
    let alpha = if i == 0 { Vec::new() } else { module::hom_free_map(poly, &res.maps[i - 1], &n, &big_i) };
    let (big_next, rels_next, beta) = match res.maps.get(i) {
        Some(phi) => {
            let (b, r) = module::hom_free(poly, &phi.source, &n);
            let beta = module::hom_free_map(poly, phi, &n, &b);
            (b, r, beta)
        }
        None => (FreeModule::zero(), Vec::new(), vec![ModuleElement::zero(); big_i.rank()]),
    };
    let (h, _) = module::homology(&ring, &big_i, &rels_i, &alpha, &beta, &big_next, &rels_next)?;
    Ok(h)
}

/// `Tor_i^R(M, N)`, minimalized.
pub fn tor(i: usize, m: &Presentation, n: &Presentation) -> Result<Presentation> {
    if **m.ring() != **n.ring() {
        return Err(Error::MixedRings);
    }
    let ring = m.ring().clone();
    let poly = ring.poly();
    let n = minimal_target(n)?;
    let res = resolve(m, i + 1)?;
    let Some(fi) = res.free(i) else {
        return Ok(Presentation::zero(ring));
    };
    if fi.rank() == 0 || n.rank() == 0 {
        return Ok(Presentation::zero(ring));
    }
    let (big_i, rels_i) = module::tensor_free(poly, fi, &n);
    let alpha = match res.maps.get(i) {
        Some(phi) => module::tensor_free_map(poly, phi, &n, &big_i),
        None => Vec::new(),
    };
    let (big_prev, rels_prev, beta) = if i == 0 {
        (FreeModule::zero(), Vec::new(), vec![ModuleElement::zero(); big_i.rank()])
    } else {
        let phi = &res.maps[i - 1];
        let (b, r) = module::tensor_free(poly, &phi.target, &n);
        let beta = module::tensor_free_map(poly, phi, &n, &b);
        (b, r, beta)
    };
    let (h, _) = module::homology(&ring, &big_i, &rels_i, &alpha, &beta, &big_prev, &rels_prev)?;
    Ok(h)
}

/// `M` as a module over the ambient polynomial ring.
pub fn restrict_to_ambient(m: &Presentation) -> Result<Presentation> {
    let ring = m.ring();
    if ring.is_polynomial_ring() {
        return Ok(m.clone());
    }
    Presentation::new(ring.ambient(), m.cover().clone(), m.submodule_generators())
}

/// Projective dimension over the ambient polynomial ring.
pub fn ambient_pd(m: &Presentation) -> Result<usize> {
    let ms = restrict_to_ambient(m)?;
    let res = resolve(&ms, ms.ring().nvars() + 1)?;
    res.length()
        .ok_or_else(|| Error::Contract("resolution over the polynomial ring did not terminate".into()))
}

/// `depth M = n - pd_S M` by Auslander-Buchsbaum over the ambient ring.
pub fn depth(m: &Presentation) -> Result<usize> {
    if m.is_zero()? {
        return Err(Error::ZeroModule("depth of zero module undefined".into()));
    }
    let pd = ambient_pd(m)?;
    Ok(m.ring().nvars() - pd)
}

/// Default truncation degree `2 * (sum of relation entry degrees) + 6`, at
/// least covering the generator degrees.
pub fn hilbert_bound(m: &Presentation) -> i32 {
    let s = m.relation_map().entry_degree_sum() as i32;
    let top = m.cover().twists.iter().copied().max().unwrap_or(0).max(0);
    2 * s + 6 + top
}

/// Hilbert functions agree on `[lo, lo + bound]`, `lo` the least generator degree.
pub fn hilbert_match(a: &Presentation, b: &Presentation, bound: i32) -> Result<Option<i32>> {
    let lo = a
        .min_generator_degree()
        .into_iter()
        .chain(b.min_generator_degree())
        .min()
        .unwrap_or(0);
    let ha = a.hilbert_range(lo, lo + bound)?;
    let hb = b.hilbert_range(lo, lo + bound)?;
    Ok(ha.iter().zip(&hb).position(|(x, y)| x != y).map(|p| lo + p as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly, PolyRing};

    fn ring(vars: &[&str], ideal: &[&str]) -> Arc<GradedRing> {
        let p = PolyRing::standard(vars);
        let gens: Vec<Poly> = ideal.iter().map(|g| p.parse(g).unwrap()).collect();
        GradedRing::new(p, gens).unwrap()
    }

    fn cyclic(r: &Arc<GradedRing>, gens: &[&str]) -> Presentation {
        let ps: Vec<Poly> = gens.iter().map(|g| r.poly().parse(g).unwrap()).collect();
        Presentation::cyclic(r.clone(), &ps).unwrap()
    }

    #[test]
    fn koszul_resolution() {
        let s = ring(&["x", "y", "z"], &[]);
        let k = cyclic(&s, &["x", "y", "z"]);
        let res = resolve(&k, 5).unwrap();
        assert_eq!(res.betti_numbers(), vec![1, 3, 3, 1]);
        assert_eq!(res.length(), Some(3));
        assert!(res.is_minimal());
        for w in res.maps.windows(2) {
            let c = w[0].compose(s.poly(), &w[1]);
            assert!(c.columns.iter().all(|v| v.is_zero()));
        }
        assert_eq!(res.betti_table()[3].get(&3), Some(&1));
    }

    #[test]
    fn periodic_over_dual_numbers() {
        let r = ring(&["x"], &["x^2"]);
        let k = cyclic(&r, &["x"]);
        let res = resolve(&k, 6).unwrap();
        assert_eq!(res.betti_numbers(), vec![1; 7]);
        assert_eq!(res.length(), None);
        // R is self-injective: Hom(k, R) is the socle and higher Ext vanish
        let rr = Presentation::free(r.clone(), vec![0]);
        let e0 = ext(0, &k, &rr).unwrap();
        assert_eq!(e0.cover().twists, vec![1]);
        assert_eq!(e0.hilbert_range(-3, 3).unwrap().iter().sum::<i64>(), 1);
        for i in 1..4 {
            assert!(ext(i, &k, &rr).unwrap().is_zero().unwrap());
        }
    }

    #[test]
    fn koszul_self_duality() {
        let s = ring(&["x", "y", "z"], &[]);
        let k = cyclic(&s, &["x", "y", "z"]);
        let sm = Presentation::free(s.clone(), vec![0]);
        for i in 0..3 {
            assert!(ext(i, &k, &sm).unwrap().is_zero().unwrap());
        }
        let e3 = ext(3, &k, &sm).unwrap();
        assert_eq!(e3.cover().twists, vec![-3]);
        assert_eq!(e3.hilbert_range(-3, 2).unwrap(), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn tor_examples() {
        let s = ring(&["x", "y"], &[]);
        let m = cyclic(&s, &["x"]);
        let t0 = tor(0, &m, &m).unwrap();
        assert_eq!(t0, m);
        let t1 = tor(1, &m, &m).unwrap();
        assert_eq!(t1.cover().twists, vec![1]);
        assert_eq!(t1.hilbert_range(0, 4).unwrap(), vec![0, 1, 1, 1, 1]);
        assert!(tor(2, &m, &m).unwrap().is_zero().unwrap());
    }

    #[test]
    fn depths() {
        let s = ring(&["x", "y", "z"], &[]);
        assert_eq!(depth(&Presentation::free(s.clone(), vec![0])).unwrap(), 3);
        assert_eq!(depth(&cyclic(&s, &["x", "y", "z"])).unwrap(), 0);
        let p = PolyRing::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![3, 4, 5],
            crate::field::PrimeField::default(),
            crate::monomial::OrderKind::DegRevLex,
        )
        .unwrap();
        let gens: Vec<Poly> = ["b^2 - a*c", "c^2 - a^2*b", "b*c - a^3"].iter().map(|g| p.parse(g).unwrap()).collect();
        let t = GradedRing::new(p, gens).unwrap();
        assert_eq!(t.depth().unwrap(), 1);
        assert_eq!(t.dim(), 1);
        assert!(depth(&Presentation::zero(t.clone())).is_err());
    }
}
