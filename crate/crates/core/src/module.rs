//! Finitely presented graded modules and constructive operations on them.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::groebner::{self, GroebnerBasis, Lifter};
use crate::hilbert::{self, Laurent};
use crate::matrix::GradedMap;
use crate::poly::{Poly, PolyRing};
use crate::ring::GradedRing;
use crate::vector::{FreeModule, ModuleElement, Space, Term};

/// `coker(F1 -> F0)` over `R`; `relations` are the images of the F1 basis.
#[derive(Debug)]
pub struct Presentation {
    ring: Arc<GradedRing>,
    cover: FreeModule,
    relations: Vec<ModuleElement>,
    rel_twists: Vec<i32>,
    gb: OnceLock<Result<GroebnerBasis>>,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Presentation {
            ring: self.ring.clone(),
            cover: self.cover.clone(),
            relations: self.relations.clone(),
            rel_twists: self.rel_twists.clone(),
            gb: OnceLock::new(),
        }
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.cover == other.cover && self.relations == other.relations
    }
}
impl Eq for Presentation {}

/// Result of minimalization, with the isomorphism on covers in both directions.
#[derive(Clone, Debug)]
pub struct Minimalized {
    pub module: Presentation,
    /// Image of each old cover basis vector in the new cover.
    pub to_new: Vec<ModuleElement>,
    /// Image of each new cover basis vector in the old cover.
    pub to_old: Vec<ModuleElement>,
}

impl Presentation {
    pub fn new(ring: Arc<GradedRing>, cover: FreeModule, relations: Vec<ModuleElement>) -> Result<Self> {
        let space = Space::new(ring.poly(), &cover);
        let mut rels = Vec::with_capacity(relations.len());
        let mut twists = Vec::with_capacity(relations.len());
        for r in relations {
            for t in r.terms() {
                if t.comp as usize >= cover.rank() {
                    return Err(Error::Contract("relation has a component outside the cover".into()));
                }
            }
            match space.degree(&r) {
                Err(()) => return Err(Error::NotHomogeneous(space.display(&r))),
                Ok(None) => {}
                Ok(Some(d)) => {
                    twists.push(d);
                    rels.push(r);
                }
            }
        }
        Ok(Presentation { ring, cover, relations: rels, rel_twists: twists, gb: OnceLock::new() })
    }

    /// Free module `⊕ R(-a)`.
    pub fn free(ring: Arc<GradedRing>, twists: Vec<i32>) -> Self {
        Presentation {
            ring,
            cover: FreeModule::new(twists),
            relations: Vec::new(),
            rel_twists: Vec::new(),
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ring: Arc<GradedRing>) -> Self {
        Self::free(ring, Vec::new())
    }

    /// `R / (gens)` with the generator in degree 0.
    pub fn cyclic(ring: Arc<GradedRing>, gens: &[crate::poly::Poly]) -> Result<Self> {
        let cover = FreeModule::new(vec![0]);
        let space = Space::new(ring.poly(), &cover);
        let rels = gens.iter().map(|p| space.from_components(std::slice::from_ref(p))).collect();
        Presentation::new(ring, cover, rels)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }
    pub fn poly(&self) -> &PolyRing {
        self.ring.poly()
    }
    pub fn cover(&self) -> &FreeModule {
        &self.cover
    }
    pub fn rank(&self) -> usize {
        self.cover.rank()
    }
    pub fn relations(&self) -> &[ModuleElement] {
        &self.relations
    }
    pub fn relation_twists(&self) -> &[i32] {
        &self.rel_twists
    }
    pub fn space(&self) -> Space<'_> {
        Space::new(self.ring.poly(), &self.cover)
    }

    pub fn relation_map(&self) -> GradedMap {
        GradedMap::new(FreeModule::new(self.rel_twists.clone()), self.cover.clone(), self.relations.clone())
    }

    /// Relations together with `I · F0`: generators of the submodule `U` with `M = F0 / U`.
    pub fn submodule_generators(&self) -> Vec<ModuleElement> {
        let mut g = self.relations.clone();
        g.extend(self.ring.ideal_lift(&self.cover));
        g
    }

    pub fn gb(&self) -> Result<&GroebnerBasis> {
        self.gb
            .get_or_init(|| {
                groebner::groebner(self.ring.poly(), &self.cover, &self.submodule_generators(), self.ring.degree_cap())
            })
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn contains(&self, v: &ModuleElement) -> Result<bool> {
        Ok(self.gb()?.contains(v))
    }

    pub fn normal_form(&self, v: &ModuleElement) -> Result<ModuleElement> {
        Ok(self.gb()?.normal_form(v))
    }

    pub fn is_zero(&self) -> Result<bool> {
        if self.rank() == 0 {
            return Ok(true);
        }
        Ok(self.gb()?.is_everything())
    }

    /// No nonzero constant entry in the relation matrix.
    pub fn is_minimal(&self) -> bool {
        !self.relation_map().has_unit_entry()
    }

    pub fn min_generator_degree(&self) -> Option<i32> {
        self.cover.twists.iter().copied().min()
    }

    pub fn hilbert_series(&self) -> Result<Laurent> {
        let gb = self.gb()?;
        let mut acc = Laurent::new();
        for i in 0..self.rank() {
            let num = hilbert::numerator(&gb.leading_monomials(i), self.poly().weights());
            for (e, c) in num {
                *acc.entry(e + self.cover.twists[i]).or_insert(0) += c;
            }
        }
        acc.retain(|_, c| *c != 0);
        Ok(acc)
    }

    /// Dimensions of the graded pieces in degrees `lo..=hi`.
    pub fn hilbert_range(&self, lo: i32, hi: i32) -> Result<Vec<i64>> {
        Ok(hilbert::expand(&self.hilbert_series()?, self.poly().weights(), lo, hi))
    }

    /// Dimensions of the graded pieces in degrees `0..=up_to`.
    pub fn hilbert_function(&self, up_to: i32) -> Result<Vec<i64>> {
        self.hilbert_range(0, up_to)
    }

    /// Krull dimension of the module (`None` for the zero module).
    pub fn dim(&self) -> Result<Option<usize>> {
        let hs = self.hilbert_series()?;
        if hs.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.ring.nvars() - hilbert::order_at_one(&hs)))
    }

    /// Content description used as a cache key.
    pub fn key(&self) -> String {
        let space = self.space();
        let mut s = format!("{}\ncover {:?}\n", self.ring.key(), self.cover.twists);
        for r in &self.relations {
            s.push_str(&space.display(r));
            s.push('\n');
        }
        s
    }

    pub fn display(&self) -> String {
        let space = self.space();
        let mut s = format!("cover {:?}\nrelations\n", self.cover.twists);
        for r in &self.relations {
            s.push_str("  ");
            s.push_str(&space.display(r));
            s.push('\n');
        }
        s
    }

    /// Minimal presentation: cancels unit entries, reduces entries modulo `I`,
    /// discards redundant relations; the zero module becomes the empty presentation.
    pub fn minimalize(&self) -> Result<Minimalized> {
        let ring = self.ring.poly();
        let f = ring.field();
        let mut twists = self.cover.twists.clone();
        let mut rels = self.relations.clone();
        let n0 = twists.len();
        let unit_space = Space::new(ring, &self.cover);
        let mut to_new: Vec<ModuleElement> = (0..n0).map(|i| unit_space.unit(i)).collect();
        let mut alive: Vec<usize> = (0..n0).collect();
        loop {
            let hit = rels.iter().enumerate().find_map(|(j, r)| {
                r.terms().iter().find(|t| t.mon.is_one()).map(|t| (j, t.comp as usize, t.coef))
            });
            let Some((j, i, c)) = hit else { break };
            let cur = FreeModule::new(twists.clone());
            let space = Space::new(ring, &cur);
            let rho = rels.remove(j);
            let cinv = f.inv(c);
            // v -> v - (v_i / c) * rho kills component i
            let eliminate = |v: &ModuleElement| -> ModuleElement {
                let vi = space.component(v, i);
                if vi.is_zero() {
                    return v.clone();
                }
                let scaled = ring.scale(&vi, cinv);
                space.sub(v, &space.mul_poly(&scaled, &rho))
            };
            let shift = |v: ModuleElement| -> Vec<Term> {
                v.into_terms()
                    .into_iter()
                    .map(|mut t| {
                        debug_assert!(t.comp as usize != i);
                        if t.comp as usize > i {
                            t.comp -= 1;
                        }
                        t
                    })
                    .collect()
            };
            twists.remove(i);
            alive.remove(i);
            let next = FreeModule::new(twists.clone());
            let nspace = Space::new(ring, &next);
            rels = rels.iter().map(|r| nspace.from_terms(shift(eliminate(r)))).collect();
            rels.retain(|r| !r.is_zero());
            to_new = to_new.iter().map(|v| nspace.from_terms(shift(eliminate(v)))).collect();
        }
        let cover = FreeModule::new(twists);
        let rels: Vec<ModuleElement> = rels
            .iter()
            .map(|r| self.ring.reduce_vector(&cover, r))
            .filter(|r| !r.is_zero())
            .collect();
        let base = self.ring.ideal_lift(&cover);
        let keep = groebner::select_minimal(ring, &cover, &rels, &base, self.ring.degree_cap())?;
        let mspace = Space::new(ring, &cover);
        let rels: Vec<ModuleElement> = keep.into_iter().map(|k| mspace.make_monic(&rels[k])).collect();
        let to_new: Vec<ModuleElement> = to_new.iter().map(|v| self.ring.reduce_vector(&cover, v)).collect();
        let to_old: Vec<ModuleElement> = alive.iter().map(|&k| unit_space.unit(k)).collect();
        let module = Presentation::new(self.ring.clone(), cover, rels)?;
        Ok(Minimalized { module, to_new, to_old })
    }

    pub fn minimal(&self) -> Result<Presentation> {
        Ok(self.minimalize()?.module)
    }
}

/// Maps a vector's components through `f` into another space.
pub(crate) fn remap(target: Space, v: &ModuleElement, f: impl Fn(usize) -> usize) -> ModuleElement {
    target.from_terms(
        v.terms()
            .iter()
            .map(|t| Term { mon: t.mon.clone(), comp: f(t.comp as usize) as u32, coef: t.coef })
            .collect(),
    )
}

/// Presents `(⟨gens⟩ + D) / D` inside `F / I F`; returns the presentation and
/// the chosen generators as vectors of `free`.
pub(crate) fn subquotient(
    ring: &Arc<GradedRing>,
    free: &FreeModule,
    gens: &[ModuleElement],
    denominators: &[ModuleElement],
) -> Result<(Presentation, Vec<ModuleElement>)> {
    let poly = ring.poly();
    let cap = ring.degree_cap();
    let space = Space::new(poly, free);
    let mut base = denominators.to_vec();
    base.extend(ring.ideal_lift(free));
    let keep = groebner::select_minimal(poly, free, gens, &base, cap)?;
    let kept: Vec<ModuleElement> =
        keep.into_iter().map(|k| space.make_monic(&ring.reduce_vector(free, &gens[k]))).collect();
    let twists: Vec<i32> = kept.iter().map(|g| space.degree(g).unwrap().unwrap()).collect();
    let rels = groebner::relations_modulo(poly, free, &kept, &twists, &base, cap)?;
    let pres = Presentation::new(ring.clone(), FreeModule::new(twists), rels)?;
    let min = pres.minimalize()?;
    let gens_out = min.to_old.iter().map(|v| space.apply(&kept, v)).collect();
    Ok((min.module, gens_out))
}

/// Homology at `B` of `A --alpha--> B --beta--> C` where `B = F_B / (b_rels)`
/// and `C = F_C / (c_rels)` (ideal multiples added internally). `alpha` gives
/// vectors of `F_B`; `beta` gives the image in `F_C` of each basis vector of `F_B`.
pub(crate) fn homology(
    ring: &Arc<GradedRing>,
    b_free: &FreeModule,
    b_rels: &[ModuleElement],
    alpha: &[ModuleElement],
    beta: &[ModuleElement],
    c_free: &FreeModule,
    c_rels: &[ModuleElement],
) -> Result<(Presentation, Vec<ModuleElement>)> {
    let poly = ring.poly();
    let cap = ring.degree_cap();
    let preimage = if c_free.rank() == 0 {
        let s = Space::new(poly, b_free);
        (0..b_free.rank()).map(|i| s.unit(i)).collect()
    } else {
        let mut modulo = c_rels.to_vec();
        modulo.extend(ring.ideal_lift(c_free));
        groebner::relations_modulo(poly, c_free, beta, &b_free.twists, &modulo, cap)?
    };
    let mut denominators = b_rels.to_vec();
    denominators.extend_from_slice(alpha);
    subquotient(ring, b_free, &preimage, &denominators)
}

/// A homomorphism of presented modules, given on covers.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    pub matrix: GradedMap,
}

impl ModuleMap {
    pub fn new(source: Arc<Presentation>, target: Arc<Presentation>, columns: Vec<ModuleElement>) -> Result<Self> {
        if !Arc::ptr_eq(source.ring(), target.ring()) && **source.ring() != **target.ring() {
            return Err(Error::MixedRings);
        }
        if columns.len() != source.rank() {
            return Err(Error::Incompatible("matrix columns do not match the source cover".into()));
        }
        let matrix = GradedMap::new(source.cover().clone(), target.cover().clone(), columns);
        matrix.check_homogeneous(target.poly())?;
        Ok(ModuleMap { source, target, matrix })
    }

    /// The map is well defined when every source relation maps into the target relations.
    pub fn is_well_defined(&self) -> Result<bool> {
        let ts = self.target.space();
        for r in self.source.submodule_generators() {
            if !self.target.contains(&ts.apply(&self.matrix.columns, &r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn apply(&self, v: &ModuleElement) -> ModuleElement {
        self.target.space().apply(&self.matrix.columns, v)
    }
}

/// Kernel of a map, with the inclusion given on covers.
pub fn kernel(f: &ModuleMap) -> Result<(Presentation, GradedMap)> {
    let src = &f.source;
    let tgt = &f.target;
    let (k, gens) = homology(
        src.ring(),
        src.cover(),
        src.relations(),
        &[],
        &f.matrix.columns,
        tgt.cover(),
        tgt.relations(),
    )?;
    let inc = GradedMap::new(k.cover().clone(), src.cover().clone(), gens);
    Ok((k, inc))
}

/// Cokernel of a map; `to_new` of the result is the projection on covers.
pub fn cokernel(f: &ModuleMap) -> Result<Minimalized> {
    let mut rels = f.target.relations().to_vec();
    rels.extend(f.matrix.columns.iter().cloned());
    Presentation::new(f.target.ring().clone(), f.target.cover().clone(), rels)?.minimalize()
}

/// Image of a map, with its inclusion into the target and the corestriction
/// from the source, both on covers.
pub fn image(f: &ModuleMap) -> Result<(Presentation, GradedMap, GradedMap)> {
    let tgt = &f.target;
    let (img, gens) = subquotient(tgt.ring(), tgt.cover(), &f.matrix.columns, tgt.relations())?;
    let inc = GradedMap::new(img.cover().clone(), tgt.cover().clone(), gens.clone());
    let lifter = Lifter::new(
        tgt.ring().poly(),
        tgt.cover(),
        &gens,
        &img.cover().twists,
        &tgt.submodule_generators(),
        tgt.ring().degree_cap(),
    )?;
    let mut cols = Vec::with_capacity(f.matrix.columns.len());
    for c in &f.matrix.columns {
        let l = lifter.lift(c).ok_or_else(|| Error::Contract("image generator failed to lift".into()))?;
        cols.push(l);
    }
    let cores = GradedMap::new(f.source.cover().clone(), img.cover().clone(), cols);
    Ok((img, inc, cores))
}

/// The ideal `(gens)` of `R` as a module, minimally presented.
pub fn ideal_as_module(ring: &Arc<GradedRing>, gens: &[Poly]) -> Result<Presentation> {
    let poly = ring.poly();
    let mut twists = Vec::new();
    let mut cols = Vec::new();
    for g in gens {
        let g = ring.reduce_poly(g);
        if g.is_zero() {
            continue;
        }
        let d = poly.degree(&g).ok_or_else(|| Error::NotHomogeneous(poly.display(&g)))?;
        if !poly.is_homogeneous(&g) {
            return Err(Error::NotHomogeneous(poly.display(&g)));
        }
        twists.push(d as i32);
        cols.push(g);
    }
    let r = Arc::new(Presentation::free(ring.clone(), vec![0]));
    let src = Arc::new(Presentation::free(ring.clone(), twists));
    let space = r.space();
    let columns = cols.iter().map(|g| space.from_components(std::slice::from_ref(g))).collect();
    let f = ModuleMap::new(src, r, columns)?;
    image(&f)?.0.minimal()
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Presentation,
    pub injections: [GradedMap; 2],
    pub projections: [GradedMap; 2],
}

pub fn direct_sum(a: &Presentation, b: &Presentation) -> Result<DirectSum> {
    if **a.ring() != **b.ring() {
        return Err(Error::MixedRings);
    }
    let poly = a.poly();
    let na = a.rank();
    let mut twists = a.cover().twists.clone();
    twists.extend_from_slice(&b.cover().twists);
    let cover = FreeModule::new(twists);
    let space = Space::new(poly, &cover);
    let mut rels: Vec<ModuleElement> = a.relations().iter().map(|r| remap(space, r, |i| i)).collect();
    rels.extend(b.relations().iter().map(|r| remap(space, r, |i| i + na)));
    let module = Presentation::new(a.ring().clone(), cover.clone(), rels)?;
    let inj_a = GradedMap::new(a.cover().clone(), cover.clone(), (0..na).map(|i| space.unit(i)).collect());
    let inj_b = GradedMap::new(b.cover().clone(), cover.clone(), (0..b.rank()).map(|i| space.unit(na + i)).collect());
    let sa = a.space();
    let sb = b.space();
    let pa = GradedMap::new(
        cover.clone(),
        a.cover().clone(),
        (0..cover.rank()).map(|i| if i < na { sa.unit(i) } else { ModuleElement::zero() }).collect(),
    );
    let pb = GradedMap::new(
        cover.clone(),
        b.cover().clone(),
        (0..cover.rank()).map(|i| if i >= na { sb.unit(i - na) } else { ModuleElement::zero() }).collect(),
    );
    Ok(DirectSum { module, injections: [inj_a, inj_b], projections: [pa, pb] })
}

/// `Hom(F, N)` for a free `F`: cover indexed by `(j, l)` as `j * rank(N) + l`,
/// twist `b_l - a_j`, relations the relations of `N` in each block.
pub(crate) fn hom_free(poly: &PolyRing, f: &FreeModule, n: &Presentation) -> (FreeModule, Vec<ModuleElement>) {
    let g = n.rank();
    let mut twists = Vec::with_capacity(f.rank() * g);
    for &a in &f.twists {
        for &b in &n.cover().twists {
            twists.push(b - a);
        }
    }
    let big = FreeModule::new(twists);
    let space = Space::new(poly, &big);
    let mut rels = Vec::with_capacity(f.rank() * n.relations().len());
    for j in 0..f.rank() {
        for r in n.relations() {
            rels.push(remap(space, r, |l| j * g + l));
        }
    }
    (big, rels)
}

/// `Hom(phi, N): Hom(F_tgt, N) -> Hom(F_src, N)` on covers, for `phi: F_src -> F_tgt`.
pub(crate) fn hom_free_map(poly: &PolyRing, phi: &GradedMap, n: &Presentation, src_big: &FreeModule) -> Vec<ModuleElement> {
    let g = n.rank();
    let space = Space::new(poly, src_big);
    let mut buckets: Vec<Vec<Term>> = vec![Vec::new(); phi.target.rank() * g];
    for (k, col) in phi.columns.iter().enumerate() {
        for t in col.terms() {
            let j = t.comp as usize;
            for l in 0..g {
                buckets[j * g + l].push(Term { mon: t.mon.clone(), comp: (k * g + l) as u32, coef: t.coef });
            }
        }
    }
    buckets.into_iter().map(|b| space.from_terms(b)).collect()
}

/// `F ⊗ N` for a free `F`: cover `(j, l) -> j * rank(N) + l`, twist `a_j + b_l`.
pub(crate) fn tensor_free(poly: &PolyRing, f: &FreeModule, n: &Presentation) -> (FreeModule, Vec<ModuleElement>) {
    let g = n.rank();
    let mut twists = Vec::with_capacity(f.rank() * g);
    for &a in &f.twists {
        for &b in &n.cover().twists {
            twists.push(a + b);
        }
    }
    let big = FreeModule::new(twists);
    let space = Space::new(poly, &big);
    let mut rels = Vec::new();
    for j in 0..f.rank() {
        for r in n.relations() {
            rels.push(remap(space, r, |l| j * g + l));
        }
    }
    (big, rels)
}

/// `phi ⊗ N: F_src ⊗ N -> F_tgt ⊗ N` on covers.
pub(crate) fn tensor_free_map(poly: &PolyRing, phi: &GradedMap, n: &Presentation, tgt_big: &FreeModule) -> Vec<ModuleElement> {
    let g = n.rank();
    let space = Space::new(poly, tgt_big);
    let mut out = Vec::with_capacity(phi.source.rank() * g);
    for col in &phi.columns {
        for l in 0..g {
            out.push(remap(space, col, |j| j * g + l));
        }
    }
    out
}

/// `M ⊗ N` by the block construction; cover index `(i, l) -> i * rank(N) + l`.
/// Relations: `rel(M) ⊗ G0` first, then `F0 ⊗ rel(N)`. Not minimalized.
pub fn tensor(m: &Presentation, n: &Presentation) -> Result<Presentation> {
    if **m.ring() != **n.ring() {
        return Err(Error::MixedRings);
    }
    let poly = m.poly();
    let (big, nrels) = tensor_free(poly, m.cover(), n);
    let mut rels = tensor_free_map(poly, &m.relation_map(), n, &big);
    rels.extend(nrels);
    Presentation::new(m.ring().clone(), big, rels)
}

/// `Hom(M, N)` together with the homomorphisms its generators stand for.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: Presentation,
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    /// Cover of `Hom(F0(M), N)`; vectors here encode maps `F0(M) -> G0(N)`.
    pub big: FreeModule,
    big_rels: Vec<ModuleElement>,
    /// Generators of `module`, as vectors of `big`.
    pub generators: Vec<ModuleElement>,
    lifter: OnceLock<Result<Lifter>>,
}

impl HomModule {
    /// The map `F0(M) -> G0(N)` encoded by a vector of `big`.
    pub fn as_map(&self, v: &ModuleElement) -> GradedMap {
        let g = self.target.rank();
        let r0 = self.source.rank();
        let ts = self.target.space();
        let mut cols: Vec<Vec<Term>> = vec![Vec::new(); r0];
        for t in v.terms() {
            let j = t.comp as usize / g;
            let l = t.comp as usize % g;
            cols[j].push(Term { mon: t.mon.clone(), comp: l as u32, coef: t.coef });
        }
        let shifted: Vec<i32> = self.source.cover().twists.clone();
        GradedMap::new(
            FreeModule::new(shifted),
            self.target.cover().clone(),
            cols.into_iter().map(|c| ts.from_terms(c)).collect(),
        )
    }

    /// The map encoded by generator `k`.
    pub fn generator_map(&self, k: usize) -> GradedMap {
        self.as_map(&self.generators[k])
    }

    /// Encodes a map `F0(M) -> G0(N)` (columns in `G0(N)`) as a vector of `big`.
    pub fn encode(&self, columns: &[ModuleElement]) -> ModuleElement {
        let g = self.target.rank();
        let space = Space::new(self.source.poly(), &self.big);
        let mut terms = Vec::new();
        for (j, c) in columns.iter().enumerate() {
            for t in c.terms() {
                terms.push(Term { mon: t.mon.clone(), comp: (j * g + t.comp as usize) as u32, coef: t.coef });
            }
        }
        space.from_terms(terms)
    }

    /// Coordinates, in the cover of `module`, of the homomorphism given on covers.
    pub fn coordinates(&self, columns: &[ModuleElement]) -> Result<ModuleElement> {
        let lifter = self
            .lifter
            .get_or_init(|| {
                let ring = self.source.ring();
                let mut base = self.big_rels.clone();
                base.extend(ring.ideal_lift(&self.big));
                Lifter::new(
                    ring.poly(),
                    &self.big,
                    &self.generators,
                    &self.module.cover().twists,
                    &base,
                    ring.degree_cap(),
                )
            })
            .as_ref()
            .map_err(|e| e.clone())?;
        lifter
            .lift(&self.encode(columns))
            .ok_or_else(|| Error::Contract("map is not a homomorphism of the presented modules".into()))
    }
}

pub fn hom_module(m: &Arc<Presentation>, n: &Arc<Presentation>) -> Result<HomModule> {
    if **m.ring() != **n.ring() {
        return Err(Error::MixedRings);
    }
    let ring = m.ring();
    let poly = ring.poly();
    let (big0, rels0) = hom_free(poly, m.cover(), n);
    let phi = m.relation_map();
    let (big1, rels1) = hom_free(poly, &phi.source, n);
    let beta = hom_free_map(poly, &phi, n, &big1);
    let (module, generators) = homology(ring, &big0, &rels0, &[], &beta, &big1, &rels1)?;
    Ok(HomModule {
        module,
        source: m.clone(),
        target: n.clone(),
        big: big0,
        big_rels: rels0,
        generators,
        lifter: OnceLock::new(),
    })
}

/// `Σ f(M)` over `f ∈ Hom(M, R)`, as a Gröbner basis of an ideal of `S` containing `I`.
pub fn trace_ideal(m: &Arc<Presentation>) -> Result<GroebnerBasis> {
    let ring = m.ring();
    let r = Arc::new(Presentation::free(ring.clone(), vec![0]));
    let h = hom_module(m, &r)?;
    let rs = r.space();
    let mut gens = Vec::new();
    for k in 0..h.generators.len() {
        for c in &h.generator_map(k).columns {
            let p = rs.component(c, 0);
            if !p.is_zero() {
                gens.push(p);
            }
        }
    }
    gens.extend(ring.ideal_generators().iter().cloned());
    groebner::ideal_groebner(ring.poly(), &gens, ring.degree_cap())
}

/// No free direct summand, i.e. `1 ∉ trace ideal`.
pub fn is_stable(m: &Arc<Presentation>) -> Result<bool> {
    Ok(!trace_ideal(m)?.is_everything())
}
