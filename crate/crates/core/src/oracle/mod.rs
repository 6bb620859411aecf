//! Brute-force point semantics at a finite index bound: models indexed by
//! `{0..k-1}`, their isomorphisms, and checks of the symbolic constructions
//! against them.

pub mod groupoid;
pub mod iso;
pub mod model;
pub mod verify;

pub use groupoid::PointGroupoid;
pub use iso::{compose_isos, enumerate_isos, identity_iso, invert_iso, ModelIso};
pub use model::{enumerate_models, IndexedModel, ModelSpace, Per, SizeGuard};
pub use verify::{
    is_closure_fixed, verify, CheckResult, Oracle, Suite, VerifyConfig, VerifyReport,
};
