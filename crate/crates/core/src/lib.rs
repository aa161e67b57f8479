//! Graded modules over quotients of polynomial rings over prime fields.
//!
//! Layers, bottom up: field and polynomial arithmetic, a graded Buchberger
//! engine for submodules of twisted free modules, presented modules and their
//! constructions, resolutions with Ext and Tor, and the relative invariants
//! built on a semidualizing module `C`.

pub mod cert;
pub mod error;
pub mod field;
pub mod groebner;
pub mod harness;
pub mod hilbert;
pub mod homology;
pub mod invariants;
pub mod matrix;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod relative;
pub mod ring;
pub mod vector;

pub use cert::{CertStatus, Graded, Value};
pub use error::{Error, Result};
pub use field::PrimeField;
pub use matrix::GradedMap;
pub use module::Presentation;
pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use poly::{Poly, PolyRing};
pub use relative::{DualizerKind, SemidualizingHandle};
pub use ring::GradedRing;
pub use vector::{FreeModule, ModuleElement};
