//! Degree-by-degree dense linear algebra over `F_p`, independent of the
//! Gröbner engine: graded pieces of `R = S/I` and of presented modules are
//! computed from spanning sets of monomial multiples and row reduction.
//! Used by tests to check Hilbert functions, membership, kernels and Ext.

use std::collections::{BTreeMap, HashMap};

use relhom::{Poly, PolyRing};

type Exps = Vec<u16>;
/// Sparse polynomial: exponent vector to nonzero coefficient.
pub type SPoly = BTreeMap<Exps, u64>;

fn inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Incremental row echelon form with pivots kept reduced.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [u64]) {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                let f = self.p - c;
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + f * r) % self.p;
                }
            }
        }
    }

    /// Adds `v`; true when it was independent.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv(v[piv], self.p);
        for x in v.iter_mut() {
            *x = *x * s % self.p;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                let f = self.p - c;
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = (*x + f * r) % self.p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }
}

/// Rank of a list of vectors.
pub fn rank(p: u64, vs: &[Vec<u64>]) -> usize {
    let mut e = Echelon::new(p);
    for v in vs {
        e.insert(v.clone());
    }
    e.rank()
}

/// Kernel basis of the linear map sending basis vector `j` to `cols[j]`.
pub fn kernel(p: u64, cols: &[Vec<u64>], target_dim: usize) -> Vec<Vec<u64>> {
    // row-reduce [cols | id] and keep combinations with zero image
    let n = cols.len();
    let mut e = Echelon::new(p);
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut v = c.clone();
        v.resize(target_dim, 0);
        v.extend((0..n).map(|i| u64::from(i == j)));
        e.insert(v);
    }
    for (piv, row) in &e.rows {
        if *piv >= target_dim {
            out.push(row[target_dim..].to_vec());
        }
    }
    out
}

/// Monomials of weighted degree `d` in `n` variables.
pub fn monomials(weights: &[u32], d: i32) -> Vec<Exps> {
    fn go(weights: &[u32], i: usize, left: i32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i == weights.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i] as i32;
        let mut e = 0;
        while e * w <= left {
            cur[i] = e as u16;
            go(weights, i + 1, left - e * w, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(weights, 0, d, &mut vec![0; weights.len()], &mut out);
    }
    out.sort();
    out
}

pub fn mul(p: u64, a: &SPoly, b: &SPoly) -> SPoly {
    let mut out = SPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = out.entry(e).or_insert(0);
            *c = (*c + ca * cb) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn degree(weights: &[u32], e: &Exps) -> i32 {
    e.iter().zip(weights).map(|(&x, &w)| x as i32 * w as i32).sum()
}

/// Degree of a homogeneous polynomial; `None` for zero.
pub fn poly_degree(weights: &[u32], f: &SPoly) -> Option<i32> {
    f.keys().next().map(|e| degree(weights, e))
}

/// Graded piece `S_d` with the row space of `I_d` and a complement basis for `R_d`.
#[derive(Clone, Debug)]
struct Piece {
    monos: Vec<Exps>,
    index: HashMap<Exps, usize>,
    ideal: Echelon,
    /// positions of monomials outside the pivots of `I_d`: a basis of `R_d`
    standard: Vec<usize>,
}

/// `R = S/I` with dense graded pieces computed on demand.
#[derive(Debug)]
pub struct Ring {
    pub p: u64,
    pub weights: Vec<u32>,
    ideal: Vec<SPoly>,
    pieces: std::cell::RefCell<HashMap<i32, Piece>>,
}

pub fn from_poly(f: &Poly) -> SPoly {
    f.terms().iter().map(|(m, c)| (m.exponents().to_vec(), u64::from(*c))).collect()
}

impl Ring {
    pub fn new(p: u64, weights: Vec<u32>, ideal: Vec<SPoly>) -> Self {
        Ring { p, weights, ideal, pieces: Default::default() }
    }

    pub fn from_relhom(ring: &PolyRing, ideal: &[Poly]) -> Self {
        Ring::new(
            u64::from(ring.field().characteristic()),
            ring.weights().to_vec(),
            ideal.iter().map(from_poly).collect(),
        )
    }

    fn with_piece<T>(&self, d: i32, f: impl FnOnce(&Piece) -> T) -> T {
        if let Some(pc) = self.pieces.borrow().get(&d) {
            return f(pc);
        }
        let monos = monomials(&self.weights, d);
        let index: HashMap<Exps, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut ideal = Echelon::new(self.p);
        if !monos.is_empty() {
            for g in &self.ideal {
                let Some(e) = poly_degree(&self.weights, g) else { continue };
                for m in monomials(&self.weights, d - e) {
                    let prod = mul(self.p, g, &SPoly::from([(m, 1)]));
                    let mut v = vec![0; monos.len()];
                    for (ex, c) in prod {
                        v[index[&ex]] = c;
                    }
                    ideal.insert(v);
                }
            }
        }
        let piv = ideal.pivots();
        let standard = (0..monos.len()).filter(|i| !piv.contains(i)).collect();
        let pc = Piece { monos, index, ideal, standard };
        let out = f(&pc);
        self.pieces.borrow_mut().insert(d, pc);
        out
    }

    /// `dim R_d`.
    pub fn dim(&self, d: i32) -> usize {
        self.with_piece(d, |pc| pc.standard.len())
    }

    /// Coordinates of the class of homogeneous `f` (of degree `d`) in `R_d`.
    pub fn coords(&self, d: i32, f: &SPoly) -> Vec<u64> {
        self.with_piece(d, |pc| {
            let mut v = vec![0; pc.monos.len()];
            for (e, c) in f {
                v[pc.index[e]] = *c;
            }
            pc.ideal.reduce(&mut v);
            pc.standard.iter().map(|&i| v[i]).collect()
        })
    }

    /// The polynomial with coordinates `v` on the standard basis of `R_d`.
    pub fn element(&self, d: i32, v: &[u64]) -> SPoly {
        self.with_piece(d, |pc| {
            pc.standard.iter().zip(v).filter(|(_, c)| **c != 0).map(|(&i, c)| (pc.monos[i].clone(), *c)).collect()
        })
    }

    /// Basis of `R_d` as polynomials.
    pub fn basis(&self, d: i32) -> Vec<SPoly> {
        self.with_piece(d, |pc| pc.standard.iter().map(|&i| SPoly::from([(pc.monos[i].clone(), 1)])).collect())
    }
}

/// A vector of a twisted free module `⊕ R(-t_j)`, one polynomial per component.
pub type Vector = Vec<SPoly>;

/// Degree of a homogeneous vector; `None` for zero.
pub fn vector_degree(weights: &[u32], twists: &[i32], v: &Vector) -> Option<i32> {
    v.iter().zip(twists).find_map(|(f, t)| poly_degree(weights, f).map(|d| d + t))
}

/// Coordinates of a degree-`d` vector in `(⊕ R(-t_j))_d`.
pub fn free_coords(ring: &Ring, twists: &[i32], d: i32, v: &Vector) -> Vec<u64> {
    let mut out = Vec::new();
    for (f, t) in v.iter().zip(twists) {
        out.extend(ring.coords(d - t, f));
    }
    out
}

pub fn free_dim(ring: &Ring, twists: &[i32], d: i32) -> usize {
    twists.iter().map(|t| ring.dim(d - t)).sum()
}

/// Basis of `(⊕ R(-t_j))_d` as vectors.
pub fn free_basis(ring: &Ring, twists: &[i32], d: i32) -> Vec<Vector> {
    let mut out = Vec::new();
    for (j, t) in twists.iter().enumerate() {
        for b in ring.basis(d - t) {
            let mut v = vec![SPoly::new(); twists.len()];
            v[j] = b;
            out.push(v);
        }
    }
    out
}

/// Spanning set of `U_d` for the submodule `U` generated by `gens`.
fn span(ring: &Ring, twists: &[i32], gens: &[Vector], d: i32) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for g in gens {
        let Some(e) = vector_degree(&ring.weights, twists, g) else { continue };
        for m in ring.basis(d - e) {
            let v: Vector = g.iter().map(|f| mul(ring.p, f, &m)).collect();
            out.push(free_coords(ring, twists, d, &v));
        }
    }
    out
}

/// `coker(⊕ R(-deg g) -> ⊕ R(-t_j))` with columns `relations`.
#[derive(Clone, Debug)]
pub struct Module {
    pub twists: Vec<i32>,
    pub relations: Vec<Vector>,
}

impl Module {
    pub fn from_relhom(m: &relhom::Presentation) -> Self {
        let rank = m.rank();
        let relations = m
            .relations()
            .iter()
            .map(|r| {
                let mut v = vec![SPoly::new(); rank];
                for t in r.terms() {
                    v[t.comp as usize].insert(t.mon.exponents().to_vec(), u64::from(t.coef));
                }
                v
            })
            .collect();
        Module { twists: m.cover().twists.clone(), relations }
    }

    fn relation_echelon(&self, ring: &Ring, d: i32) -> Echelon {
        let mut e = Echelon::new(ring.p);
        for v in span(ring, &self.twists, &self.relations, d) {
            e.insert(v);
        }
        e
    }

    /// `dim M_d`.
    pub fn hilbert(&self, ring: &Ring, d: i32) -> usize {
        free_dim(ring, &self.twists, d) - self.relation_echelon(ring, d).rank()
    }

    /// Whether a homogeneous cover vector lies in the relation submodule.
    pub fn is_relation(&self, ring: &Ring, v: &Vector) -> bool {
        match vector_degree(&ring.weights, &self.twists, v) {
            None => true,
            Some(d) => self.relation_echelon(ring, d).contains(&free_coords(ring, &self.twists, d, v)),
        }
    }

    /// Basis of `M_d` as cover vectors, plus the map from cover coordinates to it.
    fn quotient(&self, ring: &Ring, d: i32) -> Quotient {
        let e = self.relation_echelon(ring, d);
        let n = free_dim(ring, &self.twists, d);
        let piv = e.pivots();
        let free: Vec<usize> = (0..n).filter(|i| !piv.contains(i)).collect();
        Quotient { ech: e, free }
    }
}

struct Quotient {
    ech: Echelon,
    free: Vec<usize>,
}

impl Quotient {
    fn coords(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        self.ech.reduce(&mut w);
        self.free.iter().map(|&i| w[i]).collect()
    }
    fn dim(&self) -> usize {
        self.free.len()
    }
}

/// `dim ker(M_d -> N_d)` for the map sending cover basis `e_j` of `M` to `images[j]`.
pub fn kernel_dim(ring: &Ring, m: &Module, n: &Module, images: &[Vector], d: i32) -> usize {
    let qm = m.quotient(ring, d);
    let qn = n.quotient(ring, d);
    let mut cols = Vec::new();
    for b in free_basis(ring, &m.twists, d) {
        let c = free_coords(ring, &m.twists, d, &b);
        if qm.coords(&c).iter().all(|&x| x == 0) {
            continue;
        }
        // image of a basis vector of F_d
        let mut img: Vector = vec![SPoly::new(); n.twists.len()];
        for (j, f) in b.iter().enumerate() {
            for (k, g) in images[j].iter().enumerate() {
                let prod = mul(ring.p, f, g);
                for (e, c) in prod {
                    let x = img[k].entry(e).or_insert(0);
                    *x = (*x + c) % ring.p;
                }
            }
        }
        for comp in img.iter_mut() {
            comp.retain(|_, c| *c != 0);
        }
        cols.push(qn.coords(&free_coords(ring, &n.twists, d, &img)));
    }
    // image rank computed from the cover basis; M_d spanned by the classes, so
    // dim ker = dim M_d - rank(image)
    qm.dim() - rank(ring.p, &cols)
}

/// Minimal free resolution `F_0 <- F_1 <- ...` of `M`, degree by degree up to `top`.
/// `frees[i]` are twists of `F_i`; `maps[i]` the columns of `F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub frees: Vec<Vec<i32>>,
    pub maps: Vec<Vec<Vector>>,
    pub top: i32,
}

impl Resolution {
    /// Whether no generator was found in the last `gap` degrees at levels `<= upto`.
    pub fn settled(&self, upto: usize, gap: i32) -> bool {
        self.frees.iter().take(upto + 1).all(|tw| tw.iter().all(|&t| t <= self.top - gap))
    }
}

/// Minimal generators, degree by degree, of the submodule spanned by `vectors`
/// (given by their degree-`d` coordinates via `gen_coords`).
fn minimal_generators(ring: &Ring, twists: &[i32], cands: &[(i32, Vector)], lo: i32, top: i32) -> Vec<Vector> {
    let mut chosen: Vec<Vector> = Vec::new();
    for d in lo..=top {
        let mut e = Echelon::new(ring.p);
        for v in span(ring, twists, &chosen, d) {
            e.insert(v);
        }
        for (cd, v) in cands {
            if *cd == d && e.insert(free_coords(ring, twists, d, v)) {
                chosen.push(v.clone());
            }
        }
    }
    chosen
}

/// Degree-`d` kernel of the free map with columns `cols` (source twists `src`).
fn kernel_vectors(ring: &Ring, src: &[i32], tgt: &[i32], cols: &[Vector], d: i32) -> Vec<Vector> {
    let basis = free_basis(ring, src, d);
    let mut images = Vec::with_capacity(basis.len());
    for b in &basis {
        let mut img: Vector = vec![SPoly::new(); tgt.len()];
        for (j, f) in b.iter().enumerate() {
            if f.is_empty() {
                continue;
            }
            for (k, g) in cols[j].iter().enumerate() {
                for (e, c) in mul(ring.p, f, g) {
                    let x = img[k].entry(e).or_insert(0);
                    *x = (*x + c) % ring.p;
                }
            }
        }
        for comp in img.iter_mut() {
            comp.retain(|_, c| *c != 0);
        }
        images.push(free_coords(ring, tgt, d, &img));
    }
    let dim = free_dim(ring, tgt, d);
    kernel(ring.p, &images, dim)
        .into_iter()
        .map(|coef| {
            let mut v: Vector = vec![SPoly::new(); src.len()];
            for (b, c) in basis.iter().zip(&coef) {
                if *c == 0 {
                    continue;
                }
                for (k, f) in b.iter().enumerate() {
                    for (e, x) in f {
                        let y = v[k].entry(e.clone()).or_insert(0);
                        *y = (*y + x * c) % ring.p;
                    }
                }
            }
            for comp in v.iter_mut() {
                comp.retain(|_, c| *c != 0);
            }
            v
        })
        .collect()
}

pub fn resolve(ring: &Ring, m: &Module, length: usize, top: i32) -> Resolution {
    let lo = m.twists.iter().copied().min().unwrap_or(0);
    let mut frees = vec![m.twists.clone()];
    let mut maps = Vec::new();
    // F_1: minimal generators of the relation module
    let rel: Vec<(i32, Vector)> = m
        .relations
        .iter()
        .filter_map(|r| vector_degree(&ring.weights, &m.twists, r).map(|d| (d, r.clone())))
        .collect();
    let mut cols = minimal_generators(ring, &m.twists, &rel, lo, top);
    for _ in 0..length {
        let src: Vec<i32> = cols.iter().map(|c| vector_degree(&ring.weights, frees.last().unwrap(), c).unwrap()).collect();
        let tgt = frees.last().unwrap().clone();
        maps.push(cols.clone());
        frees.push(src.clone());
        if src.is_empty() {
            break;
        }
        let start = src.iter().copied().min().unwrap();
        let mut cands = Vec::new();
        for d in start..=top {
            for v in kernel_vectors(ring, &src, &tgt, &cols, d) {
                cands.push((d, v));
            }
        }
        cols = minimal_generators(ring, &src, &cands, start, top);
    }
    Resolution { frees, maps, top }
}

/// `dim Ext^i(M, N)_d` from a resolution of `M` (needs levels `0..=i+1`).
pub fn ext_dim(ring: &Ring, res: &Resolution, n: &Module, i: usize, d: i32) -> usize {
    let hom_dim = |level: usize| -> usize {
        res.frees.get(level).map_or(0, |tw| tw.iter().map(|b| n.quotient(ring, d + b).dim()).sum())
    };
    let delta_rank = |level: usize| -> usize {
        // Hom(F_level, N)_d -> Hom(F_{level+1}, N)_d, φ ↦ φ∘∂
        let (Some(src), Some(cols)) = (res.frees.get(level), res.maps.get(level)) else { return 0 };
        let tgt = &res.frees[level + 1];
        let nq: Vec<Quotient> = tgt.iter().map(|c| n.quotient(ring, d + c)).collect();
        let mut images = Vec::new();
        for (j, b) in src.iter().enumerate() {
            let q = n.quotient(ring, d + b);
            let fd = free_dim(ring, &n.twists, d + b);
            for &pos in &q.free {
                // φ sends e_j to the complement basis vector at `pos`
                let mut coords = vec![0; fd];
                coords[pos] = 1;
                let nv = coords_to_vector(ring, &n.twists, d + b, &coords);
                let mut img = Vec::new();
                for ((g, c), qc) in cols.iter().zip(tgt).zip(&nq) {
                    let prod: Vector = nv.iter().map(|f| mul(ring.p, f, &g[j])).collect();
                    img.extend(qc.coords(&free_coords(ring, &n.twists, d + c, &prod)));
                }
                images.push(img);
            }
        }
        rank(ring.p, &images)
    };
    let ker = hom_dim(i) - delta_rank(i);
    let im = if i == 0 { 0 } else { delta_rank(i - 1) };
    ker - im
}

fn coords_to_vector(ring: &Ring, twists: &[i32], d: i32, coords: &[u64]) -> Vector {
    let mut out = Vec::with_capacity(twists.len());
    let mut off = 0;
    for t in twists {
        let n = ring.dim(d - t);
        out.push(ring.element(d - t, &coords[off..off + n]));
        off += n;
    }
    out
}
