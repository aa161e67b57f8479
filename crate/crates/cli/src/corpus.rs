//! The line-oriented corpus format.
//!
//! ```text
//! ring R
//! char 32003
//! vars x
//! weights 1
//! ideal
//! x^2
//! end
//! module k over R
//! cover 0
//! relations
//! x
//! end
//! dualizer C = R
//! ```
//!
//! Besides rings, modules and dualizers a corpus may declare derived modules
//! (`derive <name> = <op> ...`) and harness checks
//! (`check <id|all> <module> <dualizer> [n=..] [k=..] [range=..] [bound=..]`).

use std::collections::BTreeSet;
use std::fmt;

use relhom::{OrderKind, PolyRing, PrimeField};

/// Source location; compares equal to every other span so that corpora
/// differing only in layout are equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub file: usize,
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}
impl Eq for Span {}

/// Text with the position of its first character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub text: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub char: u32,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub ideal: Vec<Located>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    pub ring: Located,
    pub cover: Vec<i32>,
    pub relations: Vec<Vec<Located>>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualizerSpec {
    Ring,
    Canonical,
    Module(Located),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualizerDecl {
    pub name: String,
    pub spec: DualizerSpec,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeriveOp {
    /// `ideal <ring> <f>, <g>, ...`: the ideal as a module.
    Ideal { ring: Located, gens: Vec<Located> },
    /// `canonical <ring>`
    Canonical { ring: Located },
    /// `tnc <module> <n> <dualizer>`
    Tnc { module: Located, n: usize, dualizer: Located },
    /// `syzygy <module> <k>`
    Syzygy { module: Located, k: usize },
    /// `transpose <module> <dualizer>`
    Transpose { module: Located, dualizer: Located },
    /// `lambda <module>`
    Lambda { module: Located },
    /// `dual <module> <dualizer>`
    Dual { module: Located, dualizer: Located },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeriveDecl {
    pub name: String,
    pub op: DeriveOp,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub range: Option<usize>,
    pub bound: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDecl {
    /// A harness check id, or `all`.
    pub id: Located,
    pub module: Located,
    pub dualizer: Located,
    pub params: Params,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub rings: Vec<RingDecl>,
    pub modules: Vec<ModuleDecl>,
    pub dualizers: Vec<DualizerDecl>,
    pub derives: Vec<DeriveDecl>,
    pub checks: Vec<CheckDecl>,
    pub files: Files,
}

/// File names for diagnostics; not part of corpus equality.
#[derive(Clone, Debug, Default)]
pub struct Files(pub Vec<String>);

impl PartialEq for Files {
    fn eq(&self, _: &Files) -> bool {
        true
    }
}
impl Eq for Files {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusError {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.file, self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for CorpusError {}

pub const DEFAULT_CHAR: u32 = 32003;

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Identifier-like check ids such as `thm-gcdim-sum`.
fn is_check_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|ch| ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '-')
}

struct Line<'a> {
    no: usize,
    /// offset of the first byte used, for column computation
    text: &'a str,
    raw: &'a str,
}

impl Line<'_> {
    fn col_of(&self, word: &str) -> usize {
        // word is a subslice of raw
        word.as_ptr() as usize - self.raw.as_ptr() as usize + 1
    }
}

struct Reader<'a> {
    file: usize,
    name: &'a str,
    lines: Vec<Line<'a>>,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(file: usize, name: &'a str, text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let body = raw.split('#').next().unwrap();
                Line { no: i + 1, text: body.trim(), raw }
            })
            .filter(|l| !l.text.is_empty())
            .collect();
        Reader { file, name, lines, pos: 0 }
    }

    fn err(&self, line: usize, col: usize, msg: impl Into<String>, expected: &[&str]) -> CorpusError {
        CorpusError {
            file: self.name.to_string(),
            line,
            col,
            message: msg.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eof(&self, expected: &[&str]) -> CorpusError {
        let line = self.lines.last().map_or(1, |l| l.no);
        self.err(line, 1, "unexpected end of input", expected)
    }

    fn next(&mut self) -> Option<&Line<'a>> {
        let l = self.lines.get(self.pos);
        self.pos += 1;
        l
    }

    fn span(&self, l: &Line, word: &str) -> Span {
        Span { file: self.file, line: l.no, col: l.col_of(word) }
    }

    fn located(&self, l: &Line, word: &str) -> Located {
        Located { text: word.to_string(), span: self.span(l, word) }
    }
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn name_word<'b>(r: &Reader, l: &Line, w: Option<&&'b str>, what: &str) -> Result<&'b str, CorpusError> {
    match w {
        Some(w) if is_ident(w) => Ok(w),
        Some(w) => Err(r.err(l.no, l.col_of(w), format!("invalid {what} `{w}`"), &["identifier"])),
        None => Err(r.err(l.no, l.text.len() + l.col_of(l.text), format!("missing {what}"), &["identifier"])),
    }
}

fn int_word<T: std::str::FromStr>(r: &Reader, l: &Line, w: &str, what: &str) -> Result<T, CorpusError> {
    w.parse().map_err(|_| r.err(l.no, l.col_of(w), format!("invalid {what} `{w}`"), &["integer"]))
}

fn end_of_line(r: &Reader, l: &Line, ws: &[&str], used: usize) -> Result<(), CorpusError> {
    match ws.get(used) {
        Some(w) => Err(r.err(l.no, l.col_of(w), format!("unexpected `{w}`"), &["end of line"])),
        None => Ok(()),
    }
}

/// Splits `text` (a subslice of the line) by commas, keeping positions.
fn comma_list<'b>(r: &Reader, l: &Line<'b>, text: &'b str) -> Vec<Located> {
    let mut out = Vec::new();
    let mut rest = text;
    loop {
        let (item, tail) = match rest.find(',') {
            Some(i) => (&rest[..i], Some(&rest[i + 1..])),
            None => (rest, None),
        };
        let t = item.trim();
        let at = if t.is_empty() { item } else { t };
        out.push(Located { text: t.to_string(), span: r.span(l, at) });
        match tail {
            Some(t) => rest = t,
            None => break,
        }
    }
    out
}

const TOP: &[&str] = &["ring", "module", "dualizer", "derive", "check"];

/// Syntax only; references are resolved by [`validate`].
fn parse_one(file: usize, name: &str, text: &str, out: &mut Corpus) -> Result<(), CorpusError> {
    let mut r = Reader::new(file, name, text);
    while let Some(l) = r.next() {
        let ws = words(l.text);
        let l = Line { no: l.no, text: l.text, raw: l.raw };
        match ws[0] {
            "ring" => {
                let n = name_word(&r, &l, ws.get(1), "ring name")?;
                end_of_line(&r, &l, &ws, 2)?;
                let span = r.span(&l, ws[0]);
                out.rings.push(parse_ring(&mut r, n, span)?);
            }
            "module" => {
                let n = name_word(&r, &l, ws.get(1), "module name")?;
                if ws.get(2) != Some(&"over") {
                    let col = ws.get(2).map_or(l.text.len() + 1, |w| l.col_of(w));
                    return Err(r.err(l.no, col, "expected `over`", &["over"]));
                }
                let ring = name_word(&r, &l, ws.get(3), "ring name")?;
                end_of_line(&r, &l, &ws, 4)?;
                let span = r.span(&l, ws[0]);
                let ring = r.located(&l, ring);
                out.modules.push(parse_module(&mut r, n, ring, span)?);
            }
            "dualizer" => {
                let n = name_word(&r, &l, ws.get(1), "dualizer name")?;
                if ws.get(2) != Some(&"=") {
                    let col = ws.get(2).map_or(l.text.len() + 1, |w| l.col_of(w));
                    return Err(r.err(l.no, col, "expected `=`", &["="]));
                }
                let spec = match ws.get(3) {
                    Some(&"R") => {
                        end_of_line(&r, &l, &ws, 4)?;
                        DualizerSpec::Ring
                    }
                    Some(&"canonical") => {
                        end_of_line(&r, &l, &ws, 4)?;
                        DualizerSpec::Canonical
                    }
                    Some(&"module") => {
                        let m = name_word(&r, &l, ws.get(4), "module name")?;
                        end_of_line(&r, &l, &ws, 5)?;
                        DualizerSpec::Module(r.located(&l, m))
                    }
                    other => {
                        let col = other.map_or(l.text.len() + 1, |w| l.col_of(w));
                        return Err(r.err(l.no, col, "invalid dualizer", &["R", "canonical", "module"]));
                    }
                };
                out.dualizers.push(DualizerDecl { name: n.to_string(), spec, span: r.span(&l, ws[0]) });
            }
            "derive" => {
                let n = name_word(&r, &l, ws.get(1), "module name")?;
                if ws.get(2) != Some(&"=") {
                    let col = ws.get(2).map_or(l.text.len() + 1, |w| l.col_of(w));
                    return Err(r.err(l.no, col, "expected `=`", &["="]));
                }
                let op = parse_derive(&r, &l, &ws)?;
                out.derives.push(DeriveDecl { name: n.to_string(), op, span: r.span(&l, ws[0]) });
            }
            "check" => {
                let id = match ws.get(1) {
                    Some(w) if is_check_id(w) => r.located(&l, w),
                    Some(w) => return Err(r.err(l.no, l.col_of(w), format!("invalid check id `{w}`"), &["check id", "all"])),
                    None => return Err(r.err(l.no, l.text.len() + 1, "missing check id", &["check id", "all"])),
                };
                let m = name_word(&r, &l, ws.get(2), "module name")?;
                let d = name_word(&r, &l, ws.get(3), "dualizer name")?;
                let mut params = Params::default();
                for w in &ws[4..] {
                    let Some((key, val)) = w.split_once('=') else {
                        return Err(r.err(l.no, l.col_of(w), format!("unexpected `{w}`"), &["n=", "k=", "range=", "bound="]));
                    };
                    let v: usize = int_word(&r, &l, val, key)?;
                    let slot = match key {
                        "n" => &mut params.n,
                        "k" => &mut params.k,
                        "range" => &mut params.range,
                        "bound" => &mut params.bound,
                        _ => return Err(r.err(l.no, l.col_of(w), format!("unknown parameter `{key}`"), &["n", "k", "range", "bound"])),
                    };
                    *slot = Some(v);
                }
                out.checks.push(CheckDecl {
                    id,
                    module: r.located(&l, m),
                    dualizer: r.located(&l, d),
                    params,
                    span: r.span(&l, ws[0]),
                });
            }
            other => return Err(r.err(l.no, l.col_of(other), format!("unexpected `{other}`"), TOP)),
        }
    }
    Ok(())
}

fn parse_ring(r: &mut Reader, name: &str, span: Span) -> Result<RingDecl, CorpusError> {
    let mut decl =
        RingDecl { name: name.to_string(), char: DEFAULT_CHAR, vars: Vec::new(), weights: Vec::new(), ideal: Vec::new(), span };
    let mut in_ideal = false;
    loop {
        let Some(l) = r.next() else { return Err(r.eof(&["end"])) };
        let l = Line { no: l.no, text: l.text, raw: l.raw };
        let ws = words(l.text);
        if ws[0] == "end" && ws.len() == 1 {
            break;
        }
        if in_ideal {
            decl.ideal.push(r.located(&l, l.text));
            continue;
        }
        match ws[0] {
            "char" => {
                let w = ws.get(1).ok_or_else(|| r.err(l.no, l.text.len() + 1, "missing characteristic", &["integer"]))?;
                decl.char = int_word(r, &l, w, "characteristic")?;
                end_of_line(r, &l, &ws, 2)?;
            }
            "vars" => {
                for w in &ws[1..] {
                    decl.vars.push(name_word(r, &l, Some(w), "variable")?.to_string());
                }
            }
            "weights" => {
                for w in &ws[1..] {
                    decl.weights.push(int_word(r, &l, w, "weight")?);
                }
            }
            "ideal" => {
                end_of_line(r, &l, &ws, 1)?;
                in_ideal = true;
            }
            other => {
                return Err(r.err(l.no, l.col_of(other), format!("unexpected `{other}` in ring block"), &["char", "vars", "weights", "ideal", "end"]))
            }
        }
    }
    if decl.vars.is_empty() {
        return Err(CorpusError {
            file: r.name.to_string(),
            line: span.line,
            col: span.col,
            message: format!("ring {name} declares no variables"),
            expected: vec!["vars".into()],
        });
    }
    Ok(decl)
}

fn parse_module(r: &mut Reader, name: &str, ring: Located, span: Span) -> Result<ModuleDecl, CorpusError> {
    let mut decl = ModuleDecl { name: name.to_string(), ring, cover: Vec::new(), relations: Vec::new(), span };
    let mut have_cover = false;
    let mut in_rel = false;
    loop {
        let Some(l) = r.next() else { return Err(r.eof(&["end"])) };
        let l = Line { no: l.no, text: l.text, raw: l.raw };
        let ws = words(l.text);
        if ws[0] == "end" && ws.len() == 1 {
            break;
        }
        if in_rel {
            let entries = comma_list(r, &l, l.text);
            if entries.len() != decl.cover.len() {
                return Err(r.err(
                    l.no,
                    l.col_of(l.text),
                    format!("relation has {} entries, cover has rank {}", entries.len(), decl.cover.len()),
                    &[],
                ));
            }
            decl.relations.push(entries);
            continue;
        }
        match ws[0] {
            "cover" => {
                for w in &ws[1..] {
                    decl.cover.push(int_word(r, &l, w, "twist")?);
                }
                have_cover = true;
            }
            "relations" if have_cover => {
                end_of_line(r, &l, &ws, 1)?;
                in_rel = true;
            }
            other => return Err(r.err(l.no, l.col_of(other), format!("unexpected `{other}` in module block"), &["cover", "relations", "end"])),
        }
    }
    if !have_cover {
        return Err(CorpusError {
            file: r.name.to_string(),
            line: span.line,
            col: span.col,
            message: format!("module {name} has no cover line"),
            expected: vec!["cover".into()],
        });
    }
    Ok(decl)
}

fn parse_derive(r: &Reader, l: &Line, ws: &[&str]) -> Result<DeriveOp, CorpusError> {
    let ops = ["ideal", "canonical", "tnc", "syzygy", "transpose", "lambda", "dual"];
    let Some(op) = ws.get(3) else { return Err(r.err(l.no, l.text.len() + 1, "missing operation", &ops)) };
    let name = |i: usize, what: &str| -> Result<Located, CorpusError> { Ok(r.located(l, name_word(r, l, ws.get(i), what)?)) };
    let int = |i: usize, what: &str| -> Result<usize, CorpusError> {
        match ws.get(i) {
            Some(w) => int_word(r, l, w, what),
            None => Err(r.err(l.no, l.text.len() + 1, format!("missing {what}"), &["integer"])),
        }
    };
    let op = match *op {
        "ideal" => {
            let ring = name(4, "ring name")?;
            let Some(first) = ws.get(5) else { return Err(r.err(l.no, l.text.len() + 1, "missing generators", &["polynomial"])) };
            let start = first.as_ptr() as usize - l.text.as_ptr() as usize;
            let gens = comma_list(r, l, &l.text[start..]);
            return Ok(DeriveOp::Ideal { ring, gens });
        }
        "canonical" => DeriveOp::Canonical { ring: name(4, "ring name")? },
        "tnc" => DeriveOp::Tnc { module: name(4, "module name")?, n: int(5, "n")?, dualizer: name(6, "dualizer name")? },
        "syzygy" => DeriveOp::Syzygy { module: name(4, "module name")?, k: int(5, "k")? },
        "transpose" => DeriveOp::Transpose { module: name(4, "module name")?, dualizer: name(5, "dualizer name")? },
        "lambda" => DeriveOp::Lambda { module: name(4, "module name")? },
        "dual" => DeriveOp::Dual { module: name(4, "module name")?, dualizer: name(5, "dualizer name")? },
        other => return Err(r.err(l.no, l.col_of(other), format!("unknown operation `{other}`"), &ops)),
    };
    let used = match &op {
        DeriveOp::Canonical { .. } | DeriveOp::Lambda { .. } => 5,
        DeriveOp::Syzygy { .. } | DeriveOp::Transpose { .. } | DeriveOp::Dual { .. } => 6,
        DeriveOp::Tnc { .. } => 7,
        DeriveOp::Ideal { .. } => unreachable!(),
    };
    end_of_line(r, l, ws, used)?;
    Ok(op)
}

/// Parses one file and validates it on its own.
pub fn parse_corpus(text: &str) -> Result<Corpus, CorpusError> {
    parse_files(&[("<input>".to_string(), text.to_string())])
}

/// Parses several files into one corpus; names are shared between files.
pub fn parse_files(files: &[(String, String)]) -> Result<Corpus, CorpusError> {
    let mut c = Corpus::default();
    for (i, (name, text)) in files.iter().enumerate() {
        parse_one(i, name, text, &mut c)?;
    }
    c.files = Files(files.iter().map(|(n, _)| n.clone()).collect());
    validate(&c)?;
    Ok(c)
}

impl Corpus {
    fn error(&self, span: Span, msg: impl Into<String>, expected: &[&str]) -> CorpusError {
        CorpusError {
            file: self.files.0.get(span.file).cloned().unwrap_or_else(|| "<input>".into()),
            line: span.line,
            col: span.col,
            message: msg.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn ring(&self, name: &str) -> Option<&RingDecl> {
        self.rings.iter().find(|r| r.name == name)
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDecl> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn derived(&self, name: &str) -> Option<&DeriveDecl> {
        self.derives.iter().find(|m| m.name == name)
    }

    pub fn dualizer(&self, name: &str) -> Option<&DualizerDecl> {
        self.dualizers.iter().find(|d| d.name == name)
    }

    pub fn has_module(&self, name: &str) -> bool {
        self.module(name).is_some() || self.derived(name).is_some()
    }

    /// The ring a (possibly derived) module lives over.
    pub fn ring_of(&self, module: &str) -> Option<&str> {
        if let Some(m) = self.module(module) {
            return Some(&m.ring.text);
        }
        match &self.derived(module)?.op {
            DeriveOp::Ideal { ring, .. } | DeriveOp::Canonical { ring } => Some(&ring.text),
            DeriveOp::Tnc { module, .. }
            | DeriveOp::Syzygy { module, .. }
            | DeriveOp::Transpose { module, .. }
            | DeriveOp::Lambda { module }
            | DeriveOp::Dual { module, .. } => self.ring_of(&module.text),
        }
    }
}

/// A polynomial ring for the declaration, with the default order.
pub fn poly_ring(decl: &RingDecl) -> Result<PolyRing, String> {
    let field = PrimeField::new(decl.char).map_err(|e| e.to_string())?;
    let weights = if decl.weights.is_empty() { vec![1; decl.vars.len()] } else { decl.weights.clone() };
    PolyRing::new(decl.vars.clone(), weights, field, OrderKind::DegRevLex).map_err(|e| e.to_string())
}

fn parse_poly(c: &Corpus, p: &PolyRing, loc: &Located) -> Result<relhom::Poly, CorpusError> {
    let f = p.parse(&loc.text).map_err(|e| {
        let span = Span { col: loc.span.col + e.column - 1, ..loc.span };
        c.error(span, e.message, &[])
    })?;
    if !p.is_homogeneous(&f) {
        return Err(c.error(loc.span, format!("`{}` is not homogeneous", loc.text), &[]));
    }
    Ok(f)
}

/// References, duplicate names, polynomial syntax and homogeneity.
pub fn validate(c: &Corpus) -> Result<(), CorpusError> {
    let mut rings = BTreeSet::new();
    for r in &c.rings {
        if !rings.insert(r.name.as_str()) {
            return Err(c.error(r.span, format!("ring {} declared twice", r.name), &[]));
        }
        if !r.weights.is_empty() && r.weights.len() != r.vars.len() {
            return Err(c.error(r.span, format!("ring {}: {} weights for {} variables", r.name, r.weights.len(), r.vars.len()), &[]));
        }
        let p = poly_ring(r).map_err(|e| c.error(r.span, format!("ring {}: {e}", r.name), &[]))?;
        for g in &r.ideal {
            parse_poly(c, &p, g)?;
        }
    }
    let mut modules = BTreeSet::new();
    let module_names = c.modules.iter().map(|m| (&m.name, m.span)).chain(c.derives.iter().map(|d| (&d.name, d.span)));
    for (name, span) in module_names {
        if !modules.insert(name.as_str()) {
            return Err(c.error(span, format!("module {name} declared twice"), &[]));
        }
    }
    let ring_ref = |loc: &Located| -> Result<&RingDecl, CorpusError> {
        c.ring(&loc.text).ok_or_else(|| c.error(loc.span, format!("undeclared ring `{}`", loc.text), &["ring name"]))
    };
    for m in &c.modules {
        let rd = ring_ref(&m.ring)?;
        let p = poly_ring(rd).map_err(|e| c.error(m.span, e, &[]))?;
        for rel in &m.relations {
            let mut deg: Option<i32> = None;
            for (e, t) in rel.iter().zip(&m.cover) {
                let f = parse_poly(c, &p, e)?;
                if let Some(d) = p.degree(&f) {
                    let d = d as i32 + t;
                    match deg {
                        Some(prev) if prev != d => {
                            return Err(c.error(e.span, format!("entry `{}` has degree {d}, expected {prev}", e.text), &[]))
                        }
                        _ => deg = Some(d),
                    }
                }
            }
        }
    }
    let mut duals = BTreeSet::new();
    for d in &c.dualizers {
        if !duals.insert(d.name.as_str()) {
            return Err(c.error(d.span, format!("dualizer {} declared twice", d.name), &[]));
        }
        if let DualizerSpec::Module(m) = &d.spec {
            module_ref(c, m)?;
        }
    }
    let dual_ref = |loc: &Located| -> Result<(), CorpusError> {
        if c.dualizer(&loc.text).is_some() || loc.text == "R" || loc.text == "canonical" {
            Ok(())
        } else {
            Err(c.error(loc.span, format!("undeclared dualizer `{}`", loc.text), &["dualizer name"]))
        }
    };
    // derived modules may only refer to earlier declarations, which rules out cycles
    for (i, d) in c.derives.iter().enumerate() {
        let earlier = |loc: &Located| -> Result<(), CorpusError> {
            module_ref(c, loc)?;
            if let Some(j) = c.derives.iter().position(|e| e.name == loc.text) {
                if j >= i {
                    return Err(c.error(loc.span, format!("`{}` is derived later", loc.text), &[]));
                }
            }
            Ok(())
        };
        match &d.op {
            DeriveOp::Ideal { ring, gens } => {
                let p = poly_ring(ring_ref(ring)?).map_err(|e| c.error(d.span, e, &[]))?;
                for g in gens {
                    parse_poly(c, &p, g)?;
                }
            }
            DeriveOp::Canonical { ring } => {
                ring_ref(ring)?;
            }
            DeriveOp::Tnc { module, n, dualizer } => {
                earlier(module)?;
                dual_ref(dualizer)?;
                if *n == 0 {
                    return Err(c.error(d.span, "tnc needs n >= 1", &[]));
                }
            }
            DeriveOp::Syzygy { module, .. } | DeriveOp::Lambda { module } => earlier(module)?,
            DeriveOp::Transpose { module, dualizer } | DeriveOp::Dual { module, dualizer } => {
                earlier(module)?;
                dual_ref(dualizer)?;
            }
        }
    }
    for ch in &c.checks {
        if ch.id.text != "all" && !relhom::harness::CHECKS.contains(&ch.id.text.as_str()) {
            return Err(c.error(ch.id.span, format!("unknown check `{}`", ch.id.text), &["check id", "all"]));
        }
        module_ref(c, &ch.module)?;
        dual_ref(&ch.dualizer)?;
    }
    Ok(())
}

fn module_ref(c: &Corpus, loc: &Located) -> Result<(), CorpusError> {
    if c.has_module(&loc.text) {
        Ok(())
    } else {
        Err(c.error(loc.span, format!("undeclared module `{}`", loc.text), &["module name"]))
    }
}

fn join(xs: &[Located], sep: &str) -> String {
    xs.iter().map(|x| x.text.as_str()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Corpus {
    /// Canonical text; reparses to an equal corpus.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rings {
            writeln!(f, "ring {}", r.name)?;
            writeln!(f, "char {}", r.char)?;
            writeln!(f, "vars {}", r.vars.join(" "))?;
            if !r.weights.is_empty() {
                let w: Vec<String> = r.weights.iter().map(|w| w.to_string()).collect();
                writeln!(f, "weights {}", w.join(" "))?;
            }
            if !r.ideal.is_empty() {
                writeln!(f, "ideal")?;
                for g in &r.ideal {
                    writeln!(f, "{}", g.text)?;
                }
            }
            writeln!(f, "end")?;
        }
        for m in &self.modules {
            writeln!(f, "module {} over {}", m.name, m.ring.text)?;
            let t: Vec<String> = m.cover.iter().map(|t| t.to_string()).collect();
            writeln!(f, "cover {}", t.join(" "))?;
            if !m.relations.is_empty() {
                writeln!(f, "relations")?;
                for rel in &m.relations {
                    writeln!(f, "{}", join(rel, ", "))?;
                }
            }
            writeln!(f, "end")?;
        }
        for d in &self.dualizers {
            match &d.spec {
                DualizerSpec::Ring => writeln!(f, "dualizer {} = R", d.name)?,
                DualizerSpec::Canonical => writeln!(f, "dualizer {} = canonical", d.name)?,
                DualizerSpec::Module(m) => writeln!(f, "dualizer {} = module {}", d.name, m.text)?,
            }
        }
        for d in &self.derives {
            write!(f, "derive {} = ", d.name)?;
            match &d.op {
                DeriveOp::Ideal { ring, gens } => writeln!(f, "ideal {} {}", ring.text, join(gens, ", "))?,
                DeriveOp::Canonical { ring } => writeln!(f, "canonical {}", ring.text)?,
                DeriveOp::Tnc { module, n, dualizer } => writeln!(f, "tnc {} {n} {}", module.text, dualizer.text)?,
                DeriveOp::Syzygy { module, k } => writeln!(f, "syzygy {} {k}", module.text)?,
                DeriveOp::Transpose { module, dualizer } => writeln!(f, "transpose {} {}", module.text, dualizer.text)?,
                DeriveOp::Lambda { module } => writeln!(f, "lambda {}", module.text)?,
                DeriveOp::Dual { module, dualizer } => writeln!(f, "dual {} {}", module.text, dualizer.text)?,
            }
        }
        for ch in &self.checks {
            write!(f, "check {} {} {}", ch.id.text, ch.module.text, ch.dualizer.text)?;
            for (key, v) in [("n", ch.params.n), ("k", ch.params.k), ("range", ch.params.range), ("bound", ch.params.bound)] {
                if let Some(v) = v {
                    write!(f, " {key}={v}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
