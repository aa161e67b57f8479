//! Graded Buchberger algorithm for submodules of twisted free modules.
//!
//! One routine serves several purposes: Gröbner bases, syzygies (via cofactor
//! tracking and S-pair reductions to zero), selection of minimal generators
//! modulo a base submodule, and lifting elements to generator coordinates.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyRing};
use crate::vector::{FreeModule, ModuleElement, Space, Term};

pub const DEFAULT_DEGREE_CAP: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Generates the submodule but is not itself a candidate generator.
    Base,
    /// Kept in `GbRun::kept` when not in the span of everything before it.
    Candidate,
}

#[derive(Clone, Debug)]
pub struct GbInput {
    pub elem: ModuleElement,
    pub role: Role,
    /// Cofactor coordinate for this input, if tracked.
    pub tracked: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct GbRun {
    pub basis: Vec<ModuleElement>,
    pub cofactors: Vec<ModuleElement>,
    pub syzygies: Vec<ModuleElement>,
    pub kept: Vec<usize>,
}

struct Engine<'a> {
    space: Space<'a>,
    cof: Option<Space<'a>>,
    cap: u32,
    basis: Vec<ModuleElement>,
    cofactors: Vec<ModuleElement>,
    by_comp: Vec<Vec<usize>>,
    pending: BTreeMap<(i32, usize, usize), Monomial>,
    pending_set: HashSet<(usize, usize)>,
    syzygies: Vec<ModuleElement>,
}

impl<'a> Engine<'a> {
    fn find_reducer(&self, t: &Term) -> Option<usize> {
        self.by_comp[t.comp as usize]
            .iter()
            .copied()
            .find(|&k| self.basis[k].lead().unwrap().mon.divides(&t.mon))
    }

    fn reduce(&self, h: Vec<Term>, mut cof: Vec<Term>) -> (Vec<Term>, Vec<Term>) {
        let f = self.space.ring.field();
        let mut done: Vec<Term> = Vec::new();
        let mut rest = h;
        let mut i = 0;
        while i < rest.len() {
            match self.find_reducer(&rest[i]) {
                Some(k) => {
                    let t = &rest[i];
                    let q = self.basis[k].lead().unwrap().mon.quotient_of(&t.mon);
                    let c = f.neg(t.coef);
                    rest = self.space.axpy(&rest[i..], c, &q, self.basis[k].terms());
                    if let Some(cs) = &self.cof {
                        cof = cs.axpy(&cof, c, &q, self.cofactors[k].terms());
                    }
                    i = 0;
                }
                None => {
                    done.push(rest[i].clone());
                    i += 1;
                }
            }
        }
        done.extend(rest.drain(i..));
        (done, cof)
    }

    /// Reduces and inserts; returns true when a new basis element was created.
    fn absorb(&mut self, h: Vec<Term>, cof: Vec<Term>) -> bool {
        let (h, cof) = self.reduce(h, cof);
        if h.is_empty() {
            if !cof.is_empty() {
                self.syzygies.push(ModuleElement::from_sorted(cof));
            }
            return false;
        }
        let f = self.space.ring.field();
        let inv = f.inv(h[0].coef);
        let h = self.space.scale(&ModuleElement::from_sorted(h), inv);
        let cof = match &self.cof {
            Some(cs) => cs.scale(&ModuleElement::from_sorted(cof), inv),
            None => ModuleElement::zero(),
        };
        let idx = self.basis.len();
        let lead = h.lead().unwrap().clone();
        for &a in &self.by_comp[lead.comp as usize] {
            let l = self.basis[a].lead().unwrap().mon.lcm(&lead.mon);
            let deg = l.degree(self.space.ring.weights()) as i32 + self.space.twists[lead.comp as usize];
            self.pending.insert((deg, idx, a), l);
            self.pending_set.insert((a, idx));
        }
        self.by_comp[lead.comp as usize].push(idx);
        self.basis.push(h);
        self.cofactors.push(cof);
        true
    }

    fn chain_skips(&self, a: usize, b: usize, l: &Monomial, comp: usize) -> bool {
        let key = |x: usize, y: usize| if x < y { (x, y) } else { (y, x) };
        self.by_comp[comp].iter().any(|&c| {
            c != a
                && c != b
                && self.basis[c].lead().unwrap().mon.divides(l)
                && !self.pending_set.contains(&key(a, c))
                && !self.pending_set.contains(&key(b, c))
        })
    }

    fn process_pair(&mut self, b: usize, a: usize, l: Monomial) -> Result<()> {
        self.pending_set.remove(&(a, b));
        let comp = self.basis[a].lead().unwrap().comp as usize;
        if self.chain_skips(a, b, &l, comp) {
            return Ok(());
        }
        let ring = self.space.ring;
        let la = self.basis[a].lead().unwrap().mon.clone();
        let lb = self.basis[b].lead().unwrap().mon.clone();
        if self.space.rank() == 1 && la.is_coprime(&lb) {
            // product criterion; the Koszul relation is the syzygy
            if let Some(cs) = &self.cof {
                let ga = self.space.component(&self.basis[a], 0);
                let gb = self.space.component(&self.basis[b], 0);
                let s = cs.sub(&cs.mul_poly(&gb, &self.cofactors[a]), &cs.mul_poly(&ga, &self.cofactors[b]));
                if !s.is_zero() {
                    self.syzygies.push(s);
                }
            }
            return Ok(());
        }
        let ldeg = l.degree(ring.weights());
        if ldeg > self.cap {
            return Err(Error::DegreeCap { cap: self.cap, degree: ldeg });
        }
        let qa = la.quotient_of(&l);
        let qb = lb.quotient_of(&l);
        let f = ring.field();
        let m1 = f.neg(1);
        let s = self.space.axpy(
            &self.space.mul_term(&self.basis[a], &qa, 1).into_terms(),
            m1,
            &qb,
            self.basis[b].terms(),
        );
        let cof = match &self.cof {
            Some(cs) => cs.axpy(
                &cs.mul_term(&self.cofactors[a], &qa, 1).into_terms(),
                m1,
                &qb,
                self.cofactors[b].terms(),
            ),
            None => Vec::new(),
        };
        self.absorb(s, cof);
        Ok(())
    }
}

/// Runs graded Buchberger on `inputs`. Inputs are processed degree by degree;
/// within a degree: base inputs, then S-pairs, then candidates, each in input
/// order. `cof_twists` (when given) are the twists of the cofactor module.
pub fn run(space: Space, inputs: &[GbInput], cof_twists: Option<&[i32]>, cap: u32) -> Result<GbRun> {
    let cof = cof_twists.map(|t| Space { ring: space.ring, twists: t });
    let mut eng = Engine {
        space,
        cof,
        cap,
        basis: Vec::new(),
        cofactors: Vec::new(),
        by_comp: vec![Vec::new(); space.rank()],
        pending: BTreeMap::new(),
        pending_set: HashSet::new(),
        syzygies: Vec::new(),
    };
    let mut order: Vec<(i32, u8, usize)> = Vec::new();
    for (i, inp) in inputs.iter().enumerate() {
        if let (Some(j), Some(cs)) = (inp.tracked, &eng.cof) {
            if j >= cs.rank() {
                return Err(Error::Contract(format!("tracked index {j} out of range")));
            }
        }
        match space.degree(&inp.elem) {
            Err(()) => return Err(Error::NotHomogeneous(space.display(&inp.elem))),
            Ok(None) => {
                if let (Some(j), Some(cs)) = (inp.tracked, &eng.cof) {
                    eng.syzygies.push(cs.unit(j));
                }
            }
            Ok(Some(d)) => order.push((d, if inp.role == Role::Base { 0 } else { 1 }, i)),
        }
    }
    order.sort();
    let mut kept = Vec::new();
    let mut ip = 0;
    loop {
        let next_in = order.get(ip).map(|o| o.0);
        let next_pair = eng.pending.keys().next().map(|k| k.0);
        let d = match (next_in, next_pair) {
            (None, None) => break,
            (Some(x), None) | (None, Some(x)) => x,
            (Some(x), Some(y)) => x.min(y),
        };
        let mut take_inputs = |eng: &mut Engine, class: u8, kept: &mut Vec<usize>| {
            while ip < order.len() && order[ip].0 == d && order[ip].1 == class {
                let i = order[ip].2;
                ip += 1;
                let cof = match (inputs[i].tracked, &eng.cof) {
                    (Some(j), Some(cs)) => cs.unit(j).into_terms(),
                    _ => Vec::new(),
                };
                if eng.absorb(inputs[i].elem.terms().to_vec(), cof) && class == 1 {
                    kept.push(i);
                }
            }
        };
        take_inputs(&mut eng, 0, &mut kept);
        while let Some((&(pd, b, a), _)) = eng.pending.iter().next() {
            if pd > d {
                break;
            }
            let l = eng.pending.remove(&(pd, b, a)).unwrap();
            eng.process_pair(b, a, l)?;
        }
        take_inputs(&mut eng, 1, &mut kept);
    }
    Ok(GbRun { basis: eng.basis, cofactors: eng.cofactors, syzygies: eng.syzygies, kept })
}

/// Fully reduces `v` against a Gröbner basis (any basis of leading terms works,
/// the result is canonical when `basis` is a Gröbner basis).
pub fn reduce(space: Space, basis: &[ModuleElement], v: &ModuleElement) -> ModuleElement {
    let mut by_comp = vec![Vec::new(); space.rank()];
    for (k, g) in basis.iter().enumerate() {
        if let Some(t) = g.lead() {
            by_comp[t.comp as usize].push(k);
        }
    }
    reduce_indexed(space, basis, &by_comp, v)
}

fn reduce_indexed(space: Space, basis: &[ModuleElement], by_comp: &[Vec<usize>], v: &ModuleElement) -> ModuleElement {
    let f = space.ring.field();
    let mut done: Vec<Term> = Vec::new();
    let mut rest = v.terms().to_vec();
    let mut i = 0;
    while i < rest.len() {
        let t = &rest[i];
        let hit = by_comp[t.comp as usize]
            .iter()
            .copied()
            .find(|&k| basis[k].lead().unwrap().mon.divides(&t.mon));
        match hit {
            Some(k) => {
                let lt = basis[k].lead().unwrap();
                let q = lt.mon.quotient_of(&t.mon);
                let c = f.neg(f.mul(t.coef, f.inv(lt.coef)));
                rest = space.axpy(&rest[i..], c, &q, basis[k].terms());
                i = 0;
            }
            None => {
                done.push(rest[i].clone());
                i += 1;
            }
        }
    }
    done.extend(rest.drain(i..));
    ModuleElement::from_sorted(done)
}

/// Minimal, tail-reduced, monic basis with leading terms sorted descending.
pub fn interreduce(space: Space, basis: &[ModuleElement]) -> Vec<ModuleElement> {
    let mut keep: Vec<ModuleElement> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let Some(lg) = g.lead() else { continue };
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let Some(lh) = h.lead() else { return false };
            j != i
                && lh.comp == lg.comp
                && lh.mon.divides(&lg.mon)
                && (lh.mon != lg.mon || j < i)
        });
        if !redundant {
            keep.push(space.make_monic(g));
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<ModuleElement> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let lead = ModuleElement::from_sorted(vec![keep[i].lead().unwrap().clone()]);
        let tail = ModuleElement::from_sorted(keep[i].terms()[1..].to_vec());
        let tail = reduce(space, &others, &tail);
        out.push(space.add(&lead, &tail));
    }
    out.sort_by(|a, b| space.cmp_terms(b.lead().unwrap(), a.lead().unwrap()));
    out
}

/// A reduced Gröbner basis of a submodule of a twisted free module.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub ring: Arc<PolyRing>,
    pub free: FreeModule,
    pub generators: Vec<ModuleElement>,
    pub reduced: bool,
    by_comp: Vec<Vec<usize>>,
}

impl GroebnerBasis {
    fn from_generators(ring: Arc<PolyRing>, free: FreeModule, generators: Vec<ModuleElement>, reduced: bool) -> Self {
        let mut by_comp = vec![Vec::new(); free.rank()];
        for (k, g) in generators.iter().enumerate() {
            by_comp[g.lead().unwrap().comp as usize].push(k);
        }
        GroebnerBasis { ring, free, generators, reduced, by_comp }
    }

    pub fn space(&self) -> Space<'_> {
        Space::new(&self.ring, &self.free)
    }

    pub fn normal_form(&self, e: &ModuleElement) -> ModuleElement {
        reduce_indexed(self.space(), &self.generators, &self.by_comp, e)
    }

    pub fn contains(&self, e: &ModuleElement) -> bool {
        self.normal_form(e).is_zero()
    }

    /// Leading monomials of the generators lying in component `i`.
    pub fn leading_monomials(&self, i: usize) -> Vec<Monomial> {
        self.by_comp[i].iter().map(|&k| self.generators[k].lead().unwrap().mon.clone()).collect()
    }

    /// True when the submodule is the whole free module.
    pub fn is_everything(&self) -> bool {
        (0..self.free.rank()).all(|i| self.leading_monomials(i).iter().any(|m| m.is_one()))
    }

    /// Checks Buchberger's criterion: every S-pair reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let s = self.space();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
                if la.comp != lb.comp {
                    continue;
                }
                let l = la.mon.lcm(&lb.mon);
                let f = self.ring.field();
                let sp = s.sub(
                    &s.mul_term(a, &la.mon.quotient_of(&l), f.inv(la.coef)),
                    &s.mul_term(b, &lb.mon.quotient_of(&l), f.inv(lb.coef)),
                );
                if !self.contains(&sp) {
                    return false;
                }
            }
        }
        true
    }
}

fn check_homogeneous(space: Space, gens: &[ModuleElement]) -> Result<()> {
    for g in gens {
        if !space.is_homogeneous(g) {
            return Err(Error::NotHomogeneous(space.display(g)));
        }
        for t in g.terms() {
            if t.comp as usize >= space.rank() {
                return Err(Error::Contract("component index out of range".into()));
            }
        }
    }
    Ok(())
}

/// Reduced Gröbner basis of the submodule generated by `gens`.
pub fn groebner(ring: &Arc<PolyRing>, free: &FreeModule, gens: &[ModuleElement], cap: u32) -> Result<GroebnerBasis> {
    let space = Space::new(ring, free);
    check_homogeneous(space, gens)?;
    let inputs: Vec<GbInput> =
        gens.iter().map(|g| GbInput { elem: g.clone(), role: Role::Base, tracked: None }).collect();
    let out = run(space, &inputs, None, cap)?;
    let red = interreduce(space, &out.basis);
    Ok(GroebnerBasis::from_generators(ring.clone(), free.clone(), red, true))
}

/// Gröbner basis of an ideal of the polynomial ring.
pub fn ideal_groebner(ring: &Arc<PolyRing>, gens: &[Poly], cap: u32) -> Result<GroebnerBasis> {
    let free = FreeModule::new(vec![0]);
    let space = Space::new(ring, &free);
    let elems: Vec<ModuleElement> = gens.iter().map(|p| space.from_components(std::slice::from_ref(p))).collect();
    groebner(ring, &free, &elems, cap)
}

/// Generators of `{ c : Σ c_j cols_j ∈ ⟨modulo⟩ }`, vectors in the free module
/// with twists `col_twists`.
pub fn relations_modulo(
    ring: &PolyRing,
    target: &FreeModule,
    cols: &[ModuleElement],
    col_twists: &[i32],
    modulo: &[ModuleElement],
    cap: u32,
) -> Result<Vec<ModuleElement>> {
    let space = Space::new(ring, target);
    check_homogeneous(space, cols)?;
    check_homogeneous(space, modulo)?;
    let mut inputs: Vec<GbInput> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| GbInput { elem: c.clone(), role: Role::Base, tracked: Some(j) })
        .collect();
    inputs.extend(modulo.iter().map(|m| GbInput { elem: m.clone(), role: Role::Base, tracked: None }));
    let out = run(space, &inputs, Some(col_twists), cap)?;
    Ok(out.syzygies)
}

/// Indices of a minimal subset of `candidates` generating
/// `(⟨candidates⟩ + ⟨base⟩) / ⟨base⟩`, chosen greedily by degree then position.
pub fn select_minimal(
    ring: &PolyRing,
    target: &FreeModule,
    candidates: &[ModuleElement],
    base: &[ModuleElement],
    cap: u32,
) -> Result<Vec<usize>> {
    let space = Space::new(ring, target);
    check_homogeneous(space, candidates)?;
    check_homogeneous(space, base)?;
    let mut inputs: Vec<GbInput> =
        base.iter().map(|m| GbInput { elem: m.clone(), role: Role::Base, tracked: None }).collect();
    inputs.extend(candidates.iter().map(|c| GbInput { elem: c.clone(), role: Role::Candidate, tracked: None }));
    let out = run(space, &inputs, None, cap)?;
    let nb = base.len();
    let mut kept: Vec<usize> = out.kept.into_iter().map(|i| i - nb).collect();
    kept.sort();
    Ok(kept)
}

/// The syzygy map of `gens`: source twists are the generator degrees.
/// Zero generators are given twist 0.
pub fn syzygies(
    ring: &Arc<PolyRing>,
    target: &FreeModule,
    gens: &[ModuleElement],
    cap: u32,
) -> Result<crate::matrix::GradedMap> {
    let space = Space::new(ring, target);
    check_homogeneous(space, gens)?;
    let twists: Vec<i32> = gens.iter().map(|g| space.degree(g).ok().flatten().unwrap_or(0)).collect();
    let syz = relations_modulo(ring, target, gens, &twists, &[], cap)?;
    let source = FreeModule::new(twists);
    let sspace = Space::new(ring, &source);
    let keep = select_minimal(ring, &source, &syz, &[], cap)?;
    let cols: Vec<ModuleElement> = keep.into_iter().map(|i| sspace.make_monic(&syz[i])).collect();
    let col_twists = cols.iter().map(|c| sspace.degree(c).ok().flatten().unwrap_or(0)).collect();
    Ok(crate::matrix::GradedMap::new(FreeModule::new(col_twists), source, cols))
}

/// Expresses elements as combinations of `gens` modulo `modulo`.
#[derive(Clone, Debug)]
pub struct Lifter {
    ring: Arc<PolyRing>,
    free: FreeModule,
    coef_free: FreeModule,
    basis: Vec<ModuleElement>,
    cofactors: Vec<ModuleElement>,
    by_comp: Vec<Vec<usize>>,
}

impl Lifter {
    pub fn new(
        ring: &Arc<PolyRing>,
        free: &FreeModule,
        gens: &[ModuleElement],
        gen_twists: &[i32],
        modulo: &[ModuleElement],
        cap: u32,
    ) -> Result<Self> {
        let space = Space::new(ring, free);
        check_homogeneous(space, gens)?;
        check_homogeneous(space, modulo)?;
        let mut inputs: Vec<GbInput> = gens
            .iter()
            .enumerate()
            .map(|(j, c)| GbInput { elem: c.clone(), role: Role::Base, tracked: Some(j) })
            .collect();
        inputs.extend(modulo.iter().map(|m| GbInput { elem: m.clone(), role: Role::Base, tracked: None }));
        let out = run(space, &inputs, Some(gen_twists), cap)?;
        let mut by_comp = vec![Vec::new(); free.rank()];
        for (k, g) in out.basis.iter().enumerate() {
            by_comp[g.lead().unwrap().comp as usize].push(k);
        }
        Ok(Lifter {
            ring: ring.clone(),
            free: free.clone(),
            coef_free: FreeModule::new(gen_twists.to_vec()),
            basis: out.basis,
            cofactors: out.cofactors,
            by_comp,
        })
    }

    /// Coefficients `c` with `Σ c_j gens_j ≡ v` modulo the base, or `None`
    /// when `v` is not in the submodule.
    pub fn lift(&self, v: &ModuleElement) -> Option<ModuleElement> {
        let space = Space::new(&self.ring, &self.free);
        let cs = Space::new(&self.ring, &self.coef_free);
        let f = self.ring.field();
        let mut rest = v.terms().to_vec();
        let mut acc: Vec<Term> = Vec::new();
        while let Some(t) = rest.first().cloned() {
            let k = self.by_comp[t.comp as usize]
                .iter()
                .copied()
                .find(|&k| self.basis[k].lead().unwrap().mon.divides(&t.mon))?;
            let q = self.basis[k].lead().unwrap().mon.quotient_of(&t.mon);
            rest = space.axpy(&rest, f.neg(t.coef), &q, self.basis[k].terms());
            acc = cs.axpy(&acc, t.coef, &q, self.cofactors[k].terms());
        }
        Some(ModuleElement::from_sorted(acc))
    }
}
