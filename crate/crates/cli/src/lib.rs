//! Command line front end: corpus files, the bundled corpus, the resolution
//! cache and the `relhom` subcommands.

pub mod cache;
pub mod corpus;
pub mod workspace;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use relhom::harness::{run_check, CheckResult, Verdict};
use relhom::homology::{ext, hilbert_bound, resolve, tor};
use relhom::invariants::{gc_dim, grade, horizontally_linked, report, rgrade, stable};
use relhom::relative::{canonical_module, dual_c, lambda, t_n_c, transpose, transpose_c};
use relhom::{CertStatus, Error, Graded, Presentation, Value};
use serde::Serialize;
use sha2::{Digest, Sha256};

use corpus::{parse_files, Corpus};
use workspace::{tasks, BuildError, Task, Workspace};

/// The corpus shipped with the tool, used when no `--input` is given.
pub const BUNDLED: &[(&str, &str)] = &[
    ("koszul.corpus", include_str!("../corpus/koszul.corpus")),
    ("dual_numbers.corpus", include_str!("../corpus/dual_numbers.corpus")),
    ("node.corpus", include_str!("../corpus/node.corpus")),
    ("semigroup.corpus", include_str!("../corpus/semigroup.corpus")),
    ("tnc.corpus", include_str!("../corpus/tnc.corpus")),
];

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGREE_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "relhom", version, about = "Relative homological invariants of graded modules")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Corpus file; repeatable. Defaults to the bundled corpus.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Scan bound for Ext vanishing ("for all i > 0") conditions.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Abort Gröbner computations past this degree.
    #[arg(long, global = true, default_value_t = relhom::groebner::DEFAULT_DEGREE_CAP)]
    degree_cap: u32,
    /// Degrees compared when isomorphisms are tested by Hilbert functions.
    #[arg(long, global = true)]
    hilbert_bound: Option<i32>,
    #[arg(long, global = true)]
    json: bool,
    /// Leave timings out of the output.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Resolution cache directory (also RELHOM_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Do not read or write the resolution cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Args, Debug, Clone)]
struct ModuleArg {
    #[arg(long)]
    module: String,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    #[arg(long)]
    module: String,
    #[arg(long, default_value = "R")]
    dualizer: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal free resolution and Betti table.
    Resolve {
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 4)]
        length: usize,
    },
    /// Ext^i(M, N), with N a module (`--with`) or a dualizer.
    Ext {
        #[arg(short, long)]
        i: usize,
        #[arg(long)]
        module: String,
        #[arg(long, conflicts_with = "dualizer")]
        with: Option<String>,
        #[arg(long)]
        dualizer: Option<String>,
    },
    /// Tor_i(M, N).
    Tor {
        #[arg(short, long)]
        i: usize,
        #[arg(long)]
        module: String,
        #[arg(long)]
        with: String,
    },
    /// Tr_C M (the Auslander transpose for C = R).
    Transpose(Pair),
    /// λM = Ω Tr M.
    Lambda(ModuleArg),
    /// T_n^C M = Tr_C Ω^{n-1} M.
    Tnc {
        #[command(flatten)]
        pair: Pair,
        #[arg(short, long)]
        n: usize,
    },
    /// M^C = Hom(M, C).
    Dual(Pair),
    Grade {
        #[arg(long)]
        module: String,
        /// Compute against this dualizer instead of R.
        #[arg(long)]
        dualizer: Option<String>,
    },
    Rgrade(Pair),
    Gcdim(Pair),
    /// Stability and the horizontal linkage criterion.
    Linkage(ModuleArg),
    /// Homothety and self-Ext test for a module or declared dualizer.
    VerifySemidualizing {
        #[arg(long, required_unless_present = "dualizer")]
        module: Option<String>,
        #[arg(long)]
        dualizer: Option<String>,
        /// Ring for `--dualizer R|canonical`.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Canonical module of a Cohen-Macaulay ring.
    Canonical {
        #[arg(long)]
        ring: String,
    },
    /// Every invariant of one module.
    Report {
        #[command(flatten)]
        pair: Pair,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
    },
    /// Theorem harness.
    Verify {
        #[arg(long, conflicts_with = "all")]
        check: Option<String>,
        #[arg(long)]
        all: bool,
        /// With --check: run on this module instead of the corpus checks.
        #[arg(long, requires = "check")]
        module: Option<String>,
        #[arg(long, default_value = "R")]
        dualizer: String,
        #[arg(short, long)]
        n: Option<usize>,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(long)]
        range: Option<usize>,
    },
}

/// Errors mapped to exit codes.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Engine(Error),
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Unknown(..) => Failure::Usage(e.to_string()),
            BuildError::Engine(e) => Failure::Engine(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Runs the tool with `args` (program name first), writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::DegreeCap { .. }) {
                EXIT_DEGREE_CAP
            } else {
                EXIT_FAIL
            }
        }
    }
}

fn load(g: &Global) -> Res<Corpus> {
    let files: Vec<(String, String)> = if g.input.is_empty() {
        BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
    } else {
        let mut v = Vec::new();
        for p in &g.input {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            v.push((p.display().to_string(), text));
        }
        v
    };
    parse_files(&files).map_err(|e| Failure::Usage(e.to_string()))
}

fn install_cache(g: &Global) {
    if g.no_cache {
        relhom::homology::set_store(None);
        return;
    }
    let store = cache::default_root(g.cache_dir.as_deref()).and_then(|root| cache::DiskStore::open(&root).ok());
    relhom::homology::set_store(store.map(|s| Arc::new(s) as Arc<dyn relhom::homology::ResolutionStore>));
}

/// SHA-256 of the canonical corpus text.
pub fn corpus_hash(c: &Corpus) -> String {
    hex::encode(Sha256::digest(c.to_string().as_bytes()))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Res<i32> {
    let g = &cli.global;
    let ws = Workspace::new(load(g)?, g.degree_cap)?;
    install_cache(g);
    let w = |out: &mut dyn Write, s: String| {
        let _ = writeln!(out, "{s}");
    };
    let bound_for = |h: &relhom::SemidualizingHandle| -> Res<usize> {
        Ok(match g.bound {
            Some(b) => b,
            None => h.default_bound()?,
        })
    };
    match &cli.command {
        Command::Resolve { module, length } => {
            let m = ws.module(module)?;
            let res = resolve(&m, *length)?;
            let table = res.betti_table();
            if g.json {
                let rows: Vec<BTreeMap<String, usize>> =
                    table.iter().map(|row| row.iter().map(|(t, c)| (t.to_string(), *c)).collect()).collect();
                let v = serde_json::json!({ "betti": res.betti_numbers(), "table": rows, "complete": res.complete });
                w(out, v.to_string());
            } else {
                for (i, row) in table.iter().enumerate() {
                    let parts: Vec<String> = row.iter().map(|(t, c)| format!("{}^{c}", free_label(*t))).collect();
                    w(out, format!("F_{i}: {}", if parts.is_empty() { "0".into() } else { parts.join(" + ") }));
                }
                let b: Vec<String> = res.betti_numbers().iter().map(|b| b.to_string()).collect();
                w(out, format!("betti: {}{}", b.join(" "), if res.complete { "" } else { " ..." }));
            }
        }
        Command::Ext { i, module, with, dualizer } => {
            let m = ws.module(module)?;
            let n = match (with, dualizer) {
                (Some(n), _) => (*ws.module(n)?).clone(),
                (None, Some(d)) => (*ws.handle(d, module)?.module().clone()).clone(),
                (None, None) => Presentation::free(m.ring().clone(), vec![0]),
            };
            print_module(out, g, &ext(*i, &m, &n)?)?;
        }
        Command::Tor { i, module, with } => {
            let m = ws.module(module)?;
            print_module(out, g, &tor(*i, &m, &*ws.module(with)?)?)?;
        }
        Command::Transpose(p) => {
            let m = ws.module(&p.module)?;
            let t = if p.dualizer == "R" && ws.corpus.dualizer("R").is_none() {
                transpose(&m)?
            } else {
                transpose_c(&m, &ws.handle(&p.dualizer, &p.module)?)?
            };
            print_module(out, g, &t)?;
        }
        Command::Lambda(a) => print_module(out, g, &lambda(&*ws.module(&a.module)?)?)?,
        Command::Tnc { pair, n } => {
            if *n == 0 {
                return Err(Failure::Usage("tnc needs n >= 1".into()));
            }
            let h = ws.handle(&pair.dualizer, &pair.module)?;
            print_module(out, g, &t_n_c(&*ws.module(&pair.module)?, *n, &h)?)?;
        }
        Command::Dual(p) => {
            let h = ws.handle(&p.dualizer, &p.module)?;
            print_module(out, g, &dual_c(&*ws.module(&p.module)?, &h)?)?;
        }
        Command::Grade { module, dualizer } => {
            let m = ws.module(module)?;
            let h = match dualizer {
                Some(d) => Some(ws.handle(d, module)?),
                None => None,
            };
            print_value(out, g, &grade(&m, h.as_ref())?);
        }
        Command::Rgrade(p) => {
            let h = ws.handle(&p.dualizer, &p.module)?;
            print_value(out, g, &rgrade(&*ws.module(&p.module)?, &h, bound_for(&h)?)?);
        }
        Command::Gcdim(p) => {
            let h = ws.handle(&p.dualizer, &p.module)?;
            let m = ws.module(&p.module)?;
            if m.is_zero()? {
                return Err(Failure::Usage(format!("{} is the zero module", p.module)));
            }
            print_value(out, g, &gc_dim(&m, &h, bound_for(&h)?)?);
        }
        Command::Linkage(a) => {
            let m = ws.module(&a.module)?;
            let st = stable(&m)?;
            let tr = transpose(&m)?;
            let e1 = ext(1, &tr, &Presentation::free(m.ring().clone(), vec![0]))?.is_zero()?;
            let lh = horizontally_linked(&m)?;
            let l2 = lambda(&lambda(&m)?)?;
            let same_betti = resolve(&l2, 3)?.betti_table() == resolve(&m.minimal()?, 3)?.betti_table();
            if g.json {
                let v = serde_json::json!({
                    "stable": st.value,
                    "ext1_tr_vanishes": e1,
                    "horizontally_linked": lh.value,
                    "lambda2_betti_match": same_betti,
                });
                w(out, v.to_string());
            } else {
                w(out, format!("stable: {}", st.value));
                w(out, format!("Ext^1(Tr M, R) = 0: {e1}"));
                w(out, format!("horizontally linked: {}", lh.value));
                w(out, format!("Betti(lambda^2 M) = Betti(M) through F_3: {same_betti}"));
            }
        }
        Command::VerifySemidualizing { module, dualizer, ring } => {
            let h = match (module, dualizer) {
                (Some(m), _) => ws.candidate(m, g.bound)?,
                (None, Some(d)) => match ring {
                    Some(r) => ws.handle_over(d, r)?,
                    None => match ws.corpus.dualizer(d).map(|x| &x.spec) {
                        Some(corpus::DualizerSpec::Module(m)) => ws.handle(d, &m.text)?,
                        _ => return Err(Failure::Usage(format!("dualizer {d} needs --ring"))),
                    },
                },
                (None, None) => unreachable!("clap requires one"),
            };
            let ok = h.is_verified();
            if g.json {
                let v = serde_json::json!({
                    "verified": ok,
                    "homothety_iso": h.homothety_iso(),
                    "dualizing": h.is_dualizing(),
                    "checked_through": h.checked_through(),
                    "status": h.status(),
                    "generators": h.module().rank(),
                });
                w(out, v.to_string());
            } else if ok {
                w(out, format!("verified ({}), {} generators, dualizing: {}", h.status(), h.module().rank(), h.is_dualizing()));
            } else {
                w(out, format!("not semidualizing: {}", h.status()));
            }
            return Ok(if ok { EXIT_OK } else { EXIT_FAIL });
        }
        Command::Canonical { ring } => print_module(out, g, &canonical_module(&ws.ring(ring)?)?)?,
        Command::Report { pair, k } => {
            let h = ws.handle(&pair.dualizer, &pair.module)?;
            let r = report(&*ws.module(&pair.module)?, &h, bound_for(&h)?, *k)?;
            if g.json {
                w(out, serde_json::to_string(&r).expect("serializable"));
            } else {
                w(out, format!("dualizer: {} (bound {})", r.dualizer, r.bound));
                w(out, format!("grade: {}", show(&r.grade)));
                w(out, format!("r.grade: {}", show(&r.rgrade_c)));
                w(out, format!("depth: {}", r.depth.map_or("inf".into(), |d| d.to_string())));
                w(out, format!("G_C-dim: {}", show(&r.gc_dim)));
                let f = &r.flags;
                for (name, flag) in [
                    ("G_C-perfect", &f.gc_perfect),
                    ("reduced G_C-perfect", &f.reduced_gc_perfect),
                    ("stable", &f.stable),
                    ("horizontally linked", &f.horizontally_linked),
                    ("C-syzygy", &f.c_syzygy),
                ] {
                    w(out, format!("{name}: {}", show(flag)));
                }
                w(out, format!("C-{}-torsionless: {}", f.k, show(&f.c_k_torsionless)));
            }
        }
        Command::Verify { check, all, module, dualizer, n, k, range } => {
            let list = match (check, all, module) {
                (Some(id), _, Some(m)) => vec![Task {
                    id: id.clone(),
                    module: m.clone(),
                    dualizer: dualizer.clone(),
                    n: *n,
                    k: *k,
                    range: *range,
                    bound: g.bound,
                }],
                (Some(id), _, None) => tasks(&ws.corpus.checks).into_iter().filter(|t| &t.id == id).collect(),
                (None, true, _) => tasks(&ws.corpus.checks),
                (None, false, _) => return Err(Failure::Usage("verify needs --check <id> or --all".into())),
            };
            if let Some(id) = check {
                if !relhom::harness::CHECKS.contains(&id.as_str()) {
                    return Err(Failure::Usage(format!("unknown check `{id}`")));
                }
                if list.is_empty() {
                    return Err(Failure::Usage(format!("no corpus check declares `{id}`; pass --module")));
                }
            }
            return verify(&ws, g, list, out);
        }
    }
    Ok(EXIT_OK)
}

fn free_label(t: i32) -> String {
    match t {
        0 => "R".into(),
        t if t > 0 => format!("R(-{t})"),
        t => format!("R({})", -t),
    }
}

fn show<T: std::fmt::Display>(g: &Graded<T>) -> String {
    let mut s = format!("{} ({})", g.value, g.status);
    if let Some(w) = &g.witness {
        s.push_str(&format!(" [{w}]"));
    }
    s
}

fn print_value(out: &mut dyn Write, g: &Global, v: &Graded<Value>) {
    let text = if g.json {
        serde_json::json!({ "value": v.value.to_string(), "status": v.status, "witness": v.witness }).to_string()
    } else {
        v.value.to_string()
    };
    let _ = writeln!(out, "{text}");
}

fn print_module(out: &mut dyn Write, g: &Global, m: &Presentation) -> Res<()> {
    let m = m.minimal()?;
    let lo = m.min_generator_degree().unwrap_or(0);
    let hb = g.hilbert_bound.unwrap_or(10);
    let hf = m.hilbert_range(lo, lo + hb)?;
    if g.json {
        let rels: Vec<Vec<String>> = m
            .relations()
            .iter()
            .map(|r| m.space().components(r).iter().map(|p| m.poly().display(p)).collect())
            .collect();
        let v = serde_json::json!({
            "cover": m.cover().twists,
            "relations": rels,
            "hilbert_from": lo,
            "hilbert": hf,
        });
        let _ = writeln!(out, "{v}");
    } else {
        let _ = write!(out, "{}", m.display());
        if !m.display().ends_with('\n') {
            let _ = writeln!(out);
        }
        let hs: Vec<String> = hf.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "hilbert from degree {lo}: {}", hs.join(" "));
    }
    Ok(())
}

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    result: CheckResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

#[derive(Serialize)]
struct Report {
    tool_version: &'static str,
    corpus_hash: String,
    results: Vec<Row>,
}

fn evaluate(ws: &Workspace, g: &Global, t: &Task) -> Res<CheckResult> {
    let mut input = ws.check_input(&t.module, &t.dualizer)?;
    input.n = t.n;
    input.k = t.k;
    input.range = t.range;
    input.bound = t.bound.or(g.bound);
    input.hilbert_bound = g.hilbert_bound;
    match run_check(&t.id, &input) {
        Ok(mut r) => {
            // report the dualizer under the corpus name
            for s in r.inputs.iter_mut().filter(|s| s.starts_with("dualizer=")) {
                *s = format!("dualizer={}", t.dualizer);
            }
            Ok(r)
        }
        Err(e @ Error::DegreeCap { .. }) => Err(Failure::Engine(e)),
        Err(Error::Contract(m)) if m.starts_with("check needs") || m.starts_with("unknown check") => {
            Err(Failure::Usage(m))
        }
        Err(e) => {
            // an engine failure on a declared instance is reported, not hidden
            let mut labels = vec![format!("module={}", t.module), format!("dualizer={}", t.dualizer)];
            labels.extend(t.n.map(|n| format!("n={n}")));
            labels.extend(t.k.map(|k| format!("k={k}")));
            Ok(CheckResult {
                check: t.id.clone(),
                inputs: labels,
                verdict: Verdict::Fail,
                status: CertStatus::Failed(e.to_string()),
                witness: Some(format!("engine error: {e}")),
                hilbert_bound: g.hilbert_bound.unwrap_or_else(|| hilbert_bound(&input.module)),
            })
        }
    }
}

fn verify(ws: &Workspace, g: &Global, list: Vec<Task>, out: &mut dyn Write) -> Res<i32> {
    let slots: Vec<Mutex<Option<(Res<CheckResult>, u128)>>> = list.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(list.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(t) = list.get(i) else { break };
                let start = Instant::now();
                let r = evaluate(ws, g, t);
                *slots[i].lock().unwrap() = Some((r, start.elapsed().as_millis()));
            });
        }
    });
    let mut rows = Vec::with_capacity(list.len());
    for s in slots {
        let (r, ms) = s.into_inner().unwrap().expect("every task ran");
        rows.push(Row { result: r?, elapsed_ms: if g.no_timings { None } else { Some(ms) } });
    }
    rows.sort_by(|a, b| (&a.result.check, &a.result.inputs).cmp(&(&b.result.check, &b.result.inputs)));
    let failed = rows.iter().any(|r| r.result.verdict.is_fail());
    if g.json {
        let rep = Report { tool_version: env!("CARGO_PKG_VERSION"), corpus_hash: corpus_hash(&ws.corpus), results: rows };
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&rep).expect("serializable"));
    } else {
        let mut counts = BTreeMap::new();
        for r in &rows {
            let (tag, detail) = match &r.result.verdict {
                Verdict::Pass => ("pass", String::new()),
                Verdict::Fail => ("FAIL", String::new()),
                Verdict::Evidence(d) => ("evidence", format!(" {d}")),
                Verdict::Skipped(h) => ("skipped", format!(" (needs {h})")),
            };
            *counts.entry(tag).or_insert(0usize) += 1;
            let mut line = format!("{tag:<8} {:<20} {}{detail}", r.result.check, r.result.inputs.join(" "));
            if let Some(w) = &r.result.witness {
                line.push_str(&format!(": {w}"));
            }
            if let Some(ms) = r.elapsed_ms {
                line.push_str(&format!(" [{ms} ms]"));
            }
            let _ = writeln!(out, "{line}");
        }
        let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{v} {}", k.to_lowercase())).collect();
        let _ = writeln!(out, "{} checks: {}", rows.len(), summary.join(", "));
    }
    Ok(if failed { EXIT_FAIL } else { EXIT_OK })
}
