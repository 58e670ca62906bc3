//! Rational cohomology workbench for minimal Sullivan algebras.

pub mod catalog;
pub mod cohomology;
pub mod conjecture;
pub mod dga;
pub mod error;
pub mod gca;
pub mod gysin;
pub mod invariants;
pub mod linalg;
pub mod parser;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
