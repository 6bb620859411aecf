//! Compile a geometric theory into frame presentations of its syntactic
//! localic groupoid at a finite index bound, and check every symbolic
//! computation against a brute-force enumeration of indexed models and
//! their isomorphisms.
//!
//! The pipeline: [`parser::parse_theory`] reads a theory,
//! [`propositionalize::propositionalize`] turns it into a
//! [`presentation::FramePresentation`], [`groupoid::build_groupoid`] adds the
//! arrow and composition presentations together with the structure maps and
//! the left adjoint of the source map, and [`oracle`] enumerates points to
//! confirm the results.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod groupoid;
pub mod json;
pub mod open;
pub mod oracle;
pub mod parser;
pub mod presentation;
pub mod propositionalize;
pub mod theory;

pub use error::{Error, Result};
pub use open::{BasicOpen, Generator, Index, Open};
pub use parser::{parse_theory, render_theory};
pub use presentation::{FramePresentation, IndexSet, Inequality, Provenance};
pub use propositionalize::{double_iso_expansion, iso_expansion, propositionalize};
pub use theory::{validate_theory, Formula, Sequent, Theory};
