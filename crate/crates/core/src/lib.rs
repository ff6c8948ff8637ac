//! Decision procedures for non-commutative and weakened cylindric algebras.
//!
//! Terms are reduced to finite normal forms over the generators `d_ij` and
//! `x_l`; satisfiability of a normal form is decided by building an explicit
//! witness structure, and equations are decided by rewriting both sides into
//! sets of normal forms.

pub mod axioms;
pub mod cli;
pub mod error;
pub mod forms;
pub mod frames;
pub mod io;
pub mod oracle;
pub mod params;
pub mod random;
pub mod rewriter;
pub mod splitter;
pub mod term;
pub mod witness;

pub use error::{Error, Result};
pub use params::{Params, Variant};
