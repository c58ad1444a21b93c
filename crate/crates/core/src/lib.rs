//! Exact verification of r-qn structures on low-dimensional Lie algebras.

pub mod catalog;
pub mod cochains;
pub mod double;
pub mod equivalence;
pub mod exact_arith;
pub mod lie_core;
pub mod structures;
