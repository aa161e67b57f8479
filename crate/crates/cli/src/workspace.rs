//! Engine objects built from a validated corpus, on demand.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use relhom::harness::{CheckInput, CHECKS};
use relhom::module::ideal_as_module;
use relhom::relative::{canonical_module, dual_c, lambda, syzygy, t_n_c, transpose_c, verify_semidualizing};
use relhom::vector::Space;
use relhom::{DualizerKind, Error, FreeModule, GradedRing, Poly, Presentation, SemidualizingHandle};

use crate::corpus::{poly_ring, CheckDecl, Corpus, DeriveOp, DualizerSpec};

pub struct Workspace {
    pub corpus: Corpus,
    cap: u32,
    rings: BTreeMap<String, Arc<GradedRing>>,
    modules: Mutex<BTreeMap<String, Arc<Presentation>>>,
    handles: Mutex<BTreeMap<(String, String), SemidualizingHandle>>,
}

/// Failures while building objects: unknown names are usage errors, the rest
/// come from the engine.
#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("unknown {0} `{1}`")]
    Unknown(&'static str, String),
    #[error(transparent)]
    Engine(#[from] Error),
}

pub type Result<T> = std::result::Result<T, BuildError>;

impl Workspace {
    pub fn new(corpus: Corpus, cap: u32) -> Result<Self> {
        let mut rings = BTreeMap::new();
        for r in &corpus.rings {
            let p = poly_ring(r).map_err(Error::Contract)?;
            let ideal: Vec<Poly> = r.ideal.iter().map(|g| p.parse(&g.text).expect("validated")).collect();
            rings.insert(r.name.clone(), GradedRing::with_cap(Arc::new(p), ideal, cap)?);
        }
        Ok(Workspace { corpus, cap, rings, modules: Mutex::default(), handles: Mutex::default() })
    }

    pub fn degree_cap(&self) -> u32 {
        self.cap
    }

    pub fn ring(&self, name: &str) -> Result<Arc<GradedRing>> {
        self.rings.get(name).cloned().ok_or_else(|| BuildError::Unknown("ring", name.into()))
    }

    pub fn module(&self, name: &str) -> Result<Arc<Presentation>> {
        if let Some(m) = self.modules.lock().unwrap().get(name) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.build_module(name)?);
        self.modules.lock().unwrap().insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn build_module(&self, name: &str) -> Result<Presentation> {
        if let Some(decl) = self.corpus.module(name) {
            let ring = self.ring(&decl.ring.text)?;
            let cover = FreeModule::new(decl.cover.clone());
            let space = Space::new(ring.poly(), &cover);
            let rels = decl
                .relations
                .iter()
                .map(|rel| {
                    let comps: Vec<Poly> = rel.iter().map(|e| ring.poly().parse(&e.text).expect("validated")).collect();
                    space.from_components(&comps)
                })
                .collect();
            return Ok(Presentation::new(ring, cover, rels)?);
        }
        let Some(decl) = self.corpus.derived(name) else { return Err(BuildError::Unknown("module", name.into())) };
        Ok(match &decl.op {
            DeriveOp::Ideal { ring, gens } => {
                let ring = self.ring(&ring.text)?;
                let gens: Vec<Poly> = gens.iter().map(|g| ring.poly().parse(&g.text).expect("validated")).collect();
                ideal_as_module(&ring, &gens)?
            }
            DeriveOp::Canonical { ring } => canonical_module(&self.ring(&ring.text)?)?,
            DeriveOp::Tnc { module, n, dualizer } => {
                let m = self.module(&module.text)?;
                t_n_c(&m, *n, &self.handle(&dualizer.text, &module.text)?)?
            }
            DeriveOp::Syzygy { module, k } => syzygy(&*self.module(&module.text)?, *k)?,
            DeriveOp::Transpose { module, dualizer } => {
                transpose_c(&*self.module(&module.text)?, &self.handle(&dualizer.text, &module.text)?)?
            }
            DeriveOp::Lambda { module } => lambda(&*self.module(&module.text)?)?,
            DeriveOp::Dual { module, dualizer } => {
                dual_c(&*self.module(&module.text)?, &self.handle(&dualizer.text, &module.text)?)?
            }
        })
    }

    /// Dualizer `name` over the ring of `module`. `R` and `canonical` need no
    /// declaration; declared names take precedence.
    pub fn handle(&self, name: &str, module: &str) -> Result<SemidualizingHandle> {
        let ring_name = self.corpus.ring_of(module).ok_or_else(|| BuildError::Unknown("module", module.into()))?.to_string();
        self.handle_over(name, &ring_name)
    }

    pub fn handle_over(&self, name: &str, ring_name: &str) -> Result<SemidualizingHandle> {
        let key = (name.to_string(), ring_name.to_string());
        if let Some(h) = self.handles.lock().unwrap().get(&key) {
            return Ok(h.clone());
        }
        let ring = self.ring(ring_name)?;
        let spec = match self.corpus.dualizer(name) {
            Some(d) => d.spec.clone(),
            None if name == "R" => DualizerSpec::Ring,
            None if name == "canonical" => DualizerSpec::Canonical,
            None => return Err(BuildError::Unknown("dualizer", name.into())),
        };
        let h = match spec {
            DualizerSpec::Ring => SemidualizingHandle::ring(&ring)?,
            DualizerSpec::Canonical => SemidualizingHandle::canonical(&ring)?,
            DualizerSpec::Module(m) => {
                let c = self.module(&m.text)?;
                if **c.ring() != *ring {
                    return Err(Error::MixedRings.into());
                }
                verify_semidualizing(&c, DualizerKind::Module(name.to_string()), ring.depth()? + 4)?
            }
        };
        self.handles.lock().unwrap().insert(key, h.clone());
        Ok(h)
    }

    /// A semidualizing candidate without the built-in `R`/`canonical` names.
    pub fn candidate(&self, module: &str, bound: Option<usize>) -> Result<SemidualizingHandle> {
        let c = self.module(module)?;
        let bound = match bound {
            Some(b) => b,
            None => c.ring().depth()? + 4,
        };
        Ok(verify_semidualizing(&c, DualizerKind::Module(module.to_string()), bound)?)
    }

    pub fn check_input(&self, module: &str, dualizer: &str) -> Result<CheckInput> {
        let m = self.module(module)?;
        let h = self.handle(dualizer, module)?;
        Ok(CheckInput::new(module, (*m).clone(), h))
    }
}

/// One harness evaluation requested by the corpus.
#[derive(Clone, Debug)]
pub struct Task {
    pub id: String,
    pub module: String,
    pub dualizer: String,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub range: Option<usize>,
    pub bound: Option<usize>,
}

fn needs(id: &str) -> (bool, bool) {
    match id {
        "ex-tnc-construct" => (true, false),
        "prop-ck-tors" => (false, true),
        "ex-ck-family" => (true, true),
        _ => (false, false),
    }
}

/// Expands `check` lines; `all` takes every check whose required parameters are given.
pub fn tasks(checks: &[CheckDecl]) -> Vec<Task> {
    let mut out = Vec::new();
    for c in checks {
        let ids: Vec<&str> = if c.id.text == "all" {
            CHECKS
                .iter()
                .copied()
                .filter(|id| {
                    let (n, k) = needs(id);
                    (!n || c.params.n.is_some()) && (!k || c.params.k.is_some())
                })
                .collect()
        } else {
            vec![c.id.text.as_str()]
        };
        for id in ids {
            out.push(Task {
                id: id.to_string(),
                module: c.module.text.clone(),
                dualizer: c.dualizer.text.clone(),
                n: c.params.n,
                k: c.params.k,
                range: c.params.range,
                bound: c.params.bound,
            });
        }
    }
    out
}
