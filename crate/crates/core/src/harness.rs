//! Numeric checks of the relative-perfection theorems on concrete instances.
//!
//! Every check first evaluates its hypotheses and answers `Skipped` when one
//! fails. Numeric equalities are exact; module isomorphisms are compared by
//! Hilbert functions on a window of `hilbert_bound` degrees.

use serde::Serialize;

use crate::cert::{CertStatus, Graded, Value};
use crate::error::{Error, Result};
use crate::homology::{depth, ext, hilbert_bound, hilbert_match, resolve, tor};
use crate::invariants::{gc_dim, grade, horizontally_linked, rgrade, stable};
use crate::module::{tensor, Presentation};
use crate::relative::{
    auslander_class, auslander_bound, c_k_torsionless, dual_c, is_c_syzygy, lambda, syzygy, t_n_c, transpose,
    transpose_c, SemidualizingHandle,
};

pub const CHECKS: &[&str] = &[
    "cor-depth-sum",
    "cor-dual-reduced",
    "cor-lambda-depth",
    "cor-lambda-ext",
    "cor-syzygy-equiv",
    "ex-ck-family",
    "ex-tnc-construct",
    "lemma-rgrade-shift",
    "prop-ck-tors",
    "prop-ext-trc",
    "prop-grade-lb",
    "prop-rgrade-sum",
    "thm-gcdim-sum",
    "thm-link-stable",
    "thm-linkage-numeric",
    "thm-transpose-equiv",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Agreement short of a proof, e.g. matching Hilbert functions.
    Evidence(String),
    Skipped(String),
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    pub status: CertStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub hilbert_bound: i32,
}

/// One instance: a module, a verified dualizer, and the integer parameters
/// the check reads (`n`, `k`, `range`).
#[derive(Clone, Debug)]
pub struct CheckInput {
    pub module_name: String,
    pub module: Presentation,
    pub dualizer: SemidualizingHandle,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub range: Option<usize>,
    pub bound: Option<usize>,
    pub hilbert_bound: Option<i32>,
}

impl CheckInput {
    pub fn new(name: impl Into<String>, module: Presentation, dualizer: SemidualizingHandle) -> Self {
        CheckInput { module_name: name.into(), module, dualizer, n: None, k: None, range: None, bound: None, hilbert_bound: None }
    }

    fn labels(&self) -> Vec<String> {
        let mut v = vec![format!("module={}", self.module_name), format!("dualizer={}", self.dualizer.label())];
        for (key, val) in [("n", self.n), ("k", self.k), ("range", self.range), ("bound", self.bound)] {
            if let Some(x) = val {
                v.push(format!("{key}={x}"));
            }
        }
        v
    }
}

/// Outcome of a check body before packaging.
struct Outcome {
    verdict: Verdict,
    witness: Option<String>,
}

fn pass() -> Outcome {
    Outcome { verdict: Verdict::Pass, witness: None }
}

fn fail(w: impl Into<String>) -> Outcome {
    Outcome { verdict: Verdict::Fail, witness: Some(w.into()) }
}

fn skip(h: impl Into<String>) -> Outcome {
    Outcome { verdict: Verdict::Skipped(h.into()), witness: None }
}

struct Ctx<'a> {
    c: &'a SemidualizingHandle,
    bound: usize,
    hb: i32,
    status: CertStatus,
    iso_evidence: bool,
}

impl<'a> Ctx<'a> {
    fn note<T>(&mut self, g: &Graded<T>) {
        self.status = self.status.clone().weakest(g.status.clone());
    }

    fn gd(&mut self, m: &Presentation) -> Result<Value> {
        if m.is_zero()? {
            // the zero module counts as having finite dimension
            return Ok(Value::Finite(0));
        }
        let g = gc_dim(m, self.c, self.bound)?;
        self.note(&g);
        Ok(g.value)
    }

    fn rg(&mut self, m: &Presentation) -> Result<Value> {
        let g = rgrade(m, self.c, self.bound)?;
        self.note(&g);
        Ok(g.value)
    }

    fn grade(&mut self, m: &Presentation) -> Result<Value> {
        let g = grade(m, None)?;
        self.note(&g);
        Ok(g.value)
    }

    fn flag(&mut self, g: Result<Graded<bool>>) -> Result<bool> {
        let g = g?;
        self.note(&g);
        Ok(g.value)
    }

    fn flag_value(&mut self, g: Result<Graded<Value>>) -> Result<Value> {
        let g = g?;
        self.note(&g);
        Ok(g.value)
    }

    fn depth(&self, m: &Presentation) -> Result<Value> {
        if m.is_zero()? {
            return Ok(Value::Infinite);
        }
        Ok(Value::Finite(depth(m)?))
    }

    /// `Some(n)` when `M` is reduced G_C-perfect of G_C-dimension `n`.
    fn reduced(&mut self, m: &Presentation) -> Result<Option<usize>> {
        if m.is_zero()? {
            return Ok(None);
        }
        match self.gd(m)? {
            Value::Finite(n) if n > 0 && self.rg(m)? == Value::Finite(n) => Ok(Some(n)),
            _ => Ok(None),
        }
    }

    /// `Some(d)` when `M` is G_C-perfect (grade = G_C-dim = d, finite).
    fn perfect(&mut self, m: &Presentation) -> Result<Option<usize>> {
        if m.is_zero()? {
            return Ok(None);
        }
        match self.gd(m)? {
            Value::Finite(d) if self.grade(m)? == Value::Finite(d) => Ok(Some(d)),
            _ => Ok(None),
        }
    }

    fn ext_c(&self, i: usize, m: &Presentation) -> Result<Presentation> {
        ext(i, m, self.c.module())
    }

    /// Hilbert comparison of two modules claimed isomorphic.
    fn iso(&mut self, a: &Presentation, b: &Presentation, what: &str) -> Result<Option<String>> {
        let za = a.is_zero()?;
        let zb = b.is_zero()?;
        if za && zb {
            return Ok(None);
        }
        if za != zb {
            return Ok(Some(format!("{what}: one side is zero, the other is not")));
        }
        let d = self.hb.max(hilbert_bound(a)).max(hilbert_bound(b));
        self.iso_evidence = true;
        Ok(hilbert_match(a, b, d)?.map(|deg| format!("{what}: Hilbert functions differ in degree {deg}")))
    }

    fn in_auslander(&mut self, m: &Presentation) -> Result<bool> {
        let b = auslander_bound(self.c)?;
        self.flag(auslander_class(m, self.c, b))
    }
}

/// Numeric equality with infinity handled per certificate level.
fn equal(ctx: &Ctx, lhs: Value, rhs: Value, what: &str) -> Outcome {
    if lhs != rhs {
        return fail(format!("{what}: {lhs} != {rhs}"));
    }
    if lhs.is_infinite() && !ctx.status.is_certified() {
        return Outcome { verdict: Verdict::Evidence(format!("both sides inf at {}", ctx.status)), witness: None };
    }
    pass()
}

fn plus(a: Value, b: Value) -> Value {
    match (a, b) {
        (Value::Finite(x), Value::Finite(y)) => Value::Finite(x + y),
        _ => Value::Infinite,
    }
}

fn minus_one(a: Value) -> Value {
    match a {
        Value::Finite(x) if x > 0 => Value::Finite(x - 1),
        v => v,
    }
}

pub fn run_check(id: &str, input: &CheckInput) -> Result<CheckResult> {
    input.dualizer.require_verified()?;
    let bound = match input.bound {
        Some(b) => b,
        None => input.dualizer.default_bound()?,
    };
    let hb = input.hilbert_bound.unwrap_or_else(|| hilbert_bound(&input.module));
    let mut ctx = Ctx { c: &input.dualizer, bound, hb, status: CertStatus::Certified, iso_evidence: false };
    let m = input.module.minimal()?;
    let out = match id {
        "thm-gcdim-sum" => gcdim_sum(&mut ctx, &m)?,
        "prop-ext-trc" => ext_trc(&mut ctx, &m, input.range.unwrap_or(2))?,
        "cor-lambda-ext" => lambda_ext(&mut ctx, &m, input.range.unwrap_or(2))?,
        "cor-depth-sum" => depth_sum(&mut ctx, &m)?,
        "cor-lambda-depth" => lambda_depth(&mut ctx, &m)?,
        "prop-grade-lb" => grade_lb(&mut ctx, &m, input.range.unwrap_or(4))?,
        "prop-rgrade-sum" => rgrade_sum(&mut ctx, &m)?,
        "lemma-rgrade-shift" => rgrade_shift(&mut ctx, &m, input.k.unwrap_or(1))?,
        "ex-tnc-construct" => tnc_construct(&mut ctx, &m, need(input.n, "n")?)?,
        "thm-transpose-equiv" => transpose_equiv(&mut ctx, &m)?,
        "cor-dual-reduced" => dual_reduced(&mut ctx, &m)?,
        "thm-linkage-numeric" => linkage_numeric(&mut ctx, &m)?,
        "thm-link-stable" => link_stable(&mut ctx, &m)?,
        "prop-ck-tors" => ck_tors(&mut ctx, &m, need(input.k, "k")?)?,
        "ex-ck-family" => ck_family(&mut ctx, &m, need(input.n, "n")?, need(input.k, "k")?)?,
        "cor-syzygy-equiv" => syzygy_equiv(&mut ctx, &m)?,
        other => return Err(Error::Contract(format!("unknown check id {other}"))),
    };
    let mut verdict = out.verdict;
    if verdict == Verdict::Pass && ctx.iso_evidence {
        verdict = Verdict::Evidence(format!("hilbert_match({})", ctx.hb));
    }
    let status = match verdict {
        Verdict::Skipped(_) => CertStatus::Certified,
        _ => ctx.status,
    };
    Ok(CheckResult { check: id.to_string(), inputs: input.labels(), verdict, status, witness: out.witness, hilbert_bound: hb })
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| Error::Contract(format!("check needs parameter {name}")))
}

fn gcdim_sum(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let tr = transpose_c(m, ctx.c)?;
    let e = ctx.ext_c(n, m)?;
    let lhs = plus(Value::Finite(n), ctx.gd(&tr)?);
    let rhs = ctx.gd(&e)?.plus(1);
    Ok(equal(ctx, lhs, rhs, "G_C-dim M + G_C-dim Tr_C M vs G_C-dim Ext^n(M,C) + 1"))
}

fn ext_trc(ctx: &mut Ctx, m: &Presentation, range: usize) -> Result<Outcome> {
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let tr = transpose_c(m, ctx.c)?;
    let e = ctx.ext_c(n, m)?;
    for i in 1..=range {
        let a = ctx.ext_c(i, &tr)?;
        let b = ctx.ext_c(i + n - 1, &e)?;
        if let Some(w) = ctx.iso(&a, &b, &format!("i={i}"))? {
            return Ok(fail(w));
        }
    }
    Ok(pass())
}

fn lambda_ext(ctx: &mut Ctx, m: &Presentation, range: usize) -> Result<Outcome> {
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let tr = transpose(m)?;
    if !tor(1, &tr, ctx.c.module())?.is_zero()? {
        return Ok(skip("Tor_1(Tr M, C) = 0"));
    }
    let l = tensor(&lambda(m)?, ctx.c.module())?.minimal()?;
    let e = ctx.ext_c(n, m)?;
    for i in 1..=range {
        let a = ctx.ext_c(i, &l)?;
        let b = ctx.ext_c(i + n, &e)?;
        if let Some(w) = ctx.iso(&a, &b, &format!("i={i}"))? {
            return Ok(fail(w));
        }
    }
    Ok(pass())
}

fn depth_sum(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let dual = dual_c(m, ctx.c)?;
    if ctx.gd(&dual)?.is_infinite() {
        return Ok(skip("G_C-dim M^C finite"));
    }
    let tr = transpose_c(m, ctx.c)?;
    let e = ctx.ext_c(n, m)?;
    let r = m.ring().depth()?;
    let lhs = plus(ctx.depth(m)?, ctx.depth(&tr)?);
    let rhs = minus_one(ctx.depth(&e)?.plus(r));
    Ok(equal(ctx, lhs, rhs, "depth M + depth Tr_C M vs depth R + depth Ext^n(M,C) - 1"))
}

fn lambda_depth(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let ring = m.ring().clone();
    if !ring.is_cohen_macaulay()? {
        return Ok(skip("R Cohen-Macaulay"));
    }
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let dual = dual_c(m, ctx.c)?;
    if ctx.gd(&dual)?.is_infinite() {
        return Ok(skip("G_C-dim M^C finite"));
    }
    let rh = SemidualizingHandle::ring(&ring)?;
    let star = dual_c(m, &rh)?;
    if !star.is_zero()? && resolve(&star, ring.nvars() + 2)?.length().is_none() {
        return Ok(skip("pd M^* finite"));
    }
    let e = ctx.ext_c(n, m)?;
    let lhs = ctx.depth(&lambda(m)?)?;
    let rhs = ctx.depth(&e)?.plus(n);
    Ok(equal(ctx, lhs, rhs, "depth λM vs n + depth Ext^n(M,C)"))
}

fn grade_lb(ctx: &mut Ctx, m: &Presentation, range: usize) -> Result<Outcome> {
    if m.is_zero()? || ctx.gd(m)?.is_infinite() {
        return Ok(skip("G_C-dim M finite"));
    }
    let linked = ctx.flag(horizontally_linked(m))? && !m.is_zero()?;
    for i in 1..=range {
        let e = ctx.ext_c(i, m)?;
        let g = ctx.grade(&e)?;
        let want = if linked { i + 1 } else { i };
        if g < Value::Finite(want) {
            return Ok(fail(format!("grade Ext^{i}(M,C) = {g} < {want}")));
        }
    }
    Ok(pass())
}

fn rgrade_sum(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let tr = transpose_c(m, ctx.c)?;
    let e = ctx.ext_c(n, m)?;
    let lhs = plus(Value::Finite(n), ctx.rg(&tr)?);
    let rhs = ctx.grade(&e)?.plus(1);
    Ok(equal(ctx, lhs, rhs, "r.grade M + r.grade Tr_C M vs grade Ext^n(M,C) + 1"))
}

/// Along `0 -> Ω^k M -> F_{k-1} -> ... -> F_0 -> M -> 0`.
fn rgrade_shift(ctx: &mut Ctx, m: &Presentation, k: usize) -> Result<Outcome> {
    if k == 0 {
        return Ok(skip("k > 0"));
    }
    let r = ctx.rg(m)?;
    if r <= Value::Finite(k) {
        return Ok(skip("r.grade(M, C) > k"));
    }
    let n = syzygy(m, k)?;
    let lhs = ctx.rg(&n)?;
    let rhs = match r {
        Value::Finite(x) => Value::Finite(x - k),
        v => v,
    };
    Ok(equal(ctx, lhs, rhs, "r.grade Ω^k M vs r.grade M - k"))
}

fn tnc_construct(ctx: &mut Ctx, m: &Presentation, n: usize) -> Result<Outcome> {
    if m.is_zero()? {
        return Ok(skip("M nonzero"));
    }
    let g = ctx.grade(m)?;
    if g < Value::Finite(n) || n == 0 {
        return Ok(skip("grade M >= n > 0"));
    }
    let t = t_n_c(m, n, ctx.c)?;
    let d = ctx.gd(&t)?;
    let rg = ctx.rg(&t)?;
    if d != Value::Finite(n) || rg != Value::Finite(n) {
        return Ok(fail(format!("T_n^C M has G_C-dim {d} and r.grade {rg}, expected {n}")));
    }
    if g > Value::Finite(n) {
        let gt = ctx.grade(&t)?;
        if gt != Value::Finite(0) {
            return Ok(fail(format!("grade T_n^C M = {gt}, expected 0")));
        }
        if gt == d {
            return Ok(fail("T_n^C M is G_C-perfect"));
        }
    }
    Ok(pass())
}

/// `(i)`: reduced of dim `n` and `Ext^n(M,C)` perfect of dim `n+t-1`; returns `(n, t)`.
fn side(ctx: &mut Ctx, m: &Presentation) -> Result<Option<(usize, usize)>> {
    let Some(n) = ctx.reduced(m)? else { return Ok(None) };
    let e = ctx.ext_c(n, m)?;
    match ctx.perfect(&e)? {
        Some(d) if d + 1 > n => Ok(Some((n, d + 1 - n))),
        _ => Ok(None),
    }
}

fn transpose_equiv(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let tr = transpose_c(m, ctx.c)?;
    let a = side(ctx, m)?;
    // (ii) for N = Tr_C M reads the same as (i) for N with the roles of n, t swapped
    let b = side(ctx, &tr)?.map(|(t, n)| (n, t));
    match (a, b) {
        (None, None) => Ok(skip("(i) or (ii)")),
        (Some(x), Some(y)) if x == y => Ok(pass()),
        (x, y) => Ok(fail(format!("(i) gives {x:?}, (ii) gives {y:?} as (n, t)"))),
    }
}

fn dual_reduced(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let Some((n, t)) = side(ctx, m)? else { return Ok(skip("M reduced G_C-perfect, Ext^n(M,C) G_C-perfect")) };
    if t <= 2 {
        return Ok(skip("t > 2"));
    }
    let dual = dual_c(m, ctx.c)?;
    let r = ctx.reduced(&dual)?;
    if r != Some(t - 2) {
        return Ok(fail(format!("M^C reduced G_C-perfect dimension {r:?}, expected {}", t - 2)));
    }
    let e = ctx.ext_c(t - 2, &dual)?;
    let p = ctx.perfect(&e)?;
    if p != Some(n + t - 1) {
        return Ok(fail(format!("Ext^(t-2)(M^C,C) perfect dimension {p:?}, expected {}", n + t - 1)));
    }
    Ok(pass())
}

fn linkage_hypotheses(ctx: &mut Ctx, m: &Presentation) -> Result<std::result::Result<usize, Outcome>> {
    if !ctx.flag(stable(m))? {
        return Ok(Err(skip("M stable")));
    }
    let Some(n) = ctx.reduced(m)? else { return Ok(Err(skip("M reduced G_C-perfect"))) };
    if !ctx.in_auslander(&lambda(m)?)? {
        return Ok(Err(skip("λM in the Auslander class of C")));
    }
    Ok(Ok(n))
}

fn linkage_numeric(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    let n = match linkage_hypotheses(ctx, m)? {
        Ok(n) => n,
        Err(o) => return Ok(o),
    };
    let lh = ctx.flag(horizontally_linked(m))?;
    let e = ctx.ext_c(n, m)?;
    let ge = ctx.grade(&e)?;
    let iii = ge >= Value::Finite(n + 1);
    let mut iv = true;
    // Ext^i(M, C) = 0 for i > G_C-dim M, so i <= n suffices
    for i in 1..=n {
        let ei = ctx.ext_c(i, m)?;
        if ctx.grade(&ei)? < Value::Finite(i + 1) {
            iv = false;
        }
    }
    let rh = SemidualizingHandle::ring(m.ring())?;
    let l = lambda(m)?;
    let rl = if l.is_zero()? { Value::Infinite } else { ctx.flag_value(rgrade(&l, &rh, rh.default_bound()?))? };
    let ii = plus(Value::Finite(n), rl) == ge;
    if lh == ii && ii == iii && iii == iv {
        Ok(pass())
    } else {
        Ok(fail(format!("(i) {lh}, (ii) {ii}, (iii) {iii}, (iv) {iv}")))
    }
}

fn link_stable(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    if m.is_zero()? || !ctx.flag(stable(m))? {
        return Ok(skip("M stable"));
    }
    if ctx.gd(m)? != Value::Finite(0) {
        return Ok(skip("G_C-dim M = 0"));
    }
    let l = lambda(m)?;
    if !ctx.in_auslander(&l)? {
        return Ok(skip("λM in the Auslander class of C"));
    }
    if !ctx.flag(horizontally_linked(m))? {
        return Ok(fail("M is not horizontally linked"));
    }
    if !ctx.flag(stable(&l))? {
        return Ok(fail("λM is not stable"));
    }
    let lc = tensor(&l, ctx.c.module())?.minimal()?;
    let d = ctx.gd(&lc)?;
    if d != Value::Finite(0) {
        return Ok(fail(format!("G_C-dim(λM ⊗ C) = {d}")));
    }
    Ok(pass())
}

fn ck_tors(ctx: &mut Ctx, m: &Presentation, k: usize) -> Result<Outcome> {
    let Some(n) = ctx.reduced(m)? else { return Ok(skip("M reduced G_C-perfect")) };
    let tors = ctx.flag(c_k_torsionless(m, ctx.c, k))?;
    let e = ctx.ext_c(n, m)?;
    let ge = ctx.grade(&e)?;
    let num = ge >= Value::Finite(n + k);
    if tors == num {
        Ok(pass())
    } else {
        Ok(fail(format!("C-{k}-torsionless {tors}, grade Ext^n(M,C) = {ge} vs n + k = {}", n + k)))
    }
}

fn ck_family(ctx: &mut Ctx, m: &Presentation, n: usize, k: usize) -> Result<Outcome> {
    if m.is_zero()? || n == 0 {
        return Ok(skip("M nonzero, n > 0"));
    }
    if ctx.grade(m)? < Value::Finite(n + k) {
        return Ok(skip("grade M >= n + k"));
    }
    let t = t_n_c(m, n, ctx.c)?;
    if !ctx.flag(c_k_torsionless(&t, ctx.c, k))? {
        return Ok(fail(format!("T_n^C M is not C-{k}-torsionless")));
    }
    let r = ctx.reduced(&t)?;
    if r != Some(n) {
        return Ok(fail(format!("T_n^C M reduced G_C-perfect dimension {r:?}, expected {n}")));
    }
    Ok(pass())
}

fn syzygy_equiv(ctx: &mut Ctx, m: &Presentation) -> Result<Outcome> {
    if let Err(o) = linkage_hypotheses(ctx, m)? {
        return Ok(o);
    }
    let lh = ctx.flag(horizontally_linked(m))?;
    let t1 = ctx.flag(c_k_torsionless(m, ctx.c, 1))?;
    let syz = ctx.flag(is_c_syzygy(m, ctx.c))?;
    if lh == t1 && t1 == syz {
        Ok(pass())
    } else {
        Ok(fail(format!("linked {lh}, C-1-torsionless {t1}, C-syzygy {syz}")))
    }
}

/// Runs every check id on one input.
pub fn run_all(input: &CheckInput) -> Result<Vec<CheckResult>> {
    CHECKS.iter().map(|id| run_check(id, input)).collect()
}
