//! Combinatorial invariants of open book decompositions and pseudo-Anosov
//! dynamics: Rademacher functions on tessellated surfaces, fractional Dehn
//! twist coefficients and contact classification, orbit counts on Markov
//! transition graphs, and contact homology growth tables.

pub mod monodromy;
pub mod padyn;
pub mod rademacher;
pub mod rational;
pub mod seiferthc;
pub mod surface;

pub use rational::Rational;
