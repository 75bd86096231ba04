//! Exact rational, polynomial, and rational-function arithmetic.

mod harmonic;
mod polynomial;
mod ratfun;
mod rational;

pub use harmonic::{harmonic_exact, harmonic_value, HarmonicSequence, HarmonicValue};
pub use polynomial::{poly_arith, PolyOp, Polynomial};
pub use ratfun::{ratfun_combine, ratfun_eval, RationalFunction, TermSign};
pub use rational::Rational;
