//! Exact arithmetic for n-coefficient complexes over finitely generated
//! ordered abelian groups: group presentations and homomorphisms, pluggable
//! positivity structures, axiom checkers, Riesz-style decomposition
//! algorithms, inductive-limit realization by building blocks, coefficient
//! staging over the divisibility order, and the rank-one example family with
//! its epsilon-parametrized orders.
//!
//! All arithmetic is big-integer exact; every `yes` answer carries a
//! certificate that re-verifies by pure arithmetic, and bounded searches are
//! deterministic so reports are reproducible across runs.

pub mod abelian;
pub mod budget;
pub mod complex;
pub mod decomp;
pub mod dl;
pub mod matrix;
pub mod order;
pub mod qz;
pub mod realize;
pub mod report;

/// The scalar used everywhere. Exactness is non-negotiable, so this is a
/// big integer rather than a machine word.
pub type Int = num_bigint::BigInt;

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Builds an `Int` vector from machine integers.
pub fn ints(vs: &[i64]) -> Vec<Int> {
    vs.iter().map(|&v| Int::from(v)).collect()
}
