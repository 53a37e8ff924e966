//! Exact evaluation of generalized Fibonacci recurrences
//! `F_n = a F_{n-1} + b F_{n-2}` (and k-term variants), the plus root
//! `phi(a, b)` of `x^2 - a x - b`, and the continued fractions and nested
//! radicals that converge to it.
//!
//! The classic sequence is seeded `F_0 = F_1 = 1`.

pub mod error;
pub mod expansions;
pub mod numerics;
pub mod roots;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
pub use expansions::{
    cf_convergence_table, cf_convergent, cf_equals_ratio, radical_converged,
    radical_convergence_table, radical_iterate, ratio_convergence_table, ContinuedFractionSpec,
    ConvergenceReport, RadicalIterationState, ReportRow,
};
pub use numerics::{isqrt, parse_rational, FixedReal, Integer, Rational};
pub use roots::{
    check_reciprocal_identity, check_sqrt_identity, dominant_root_k, minus_root, phi,
    QuadraticRoots,
};
pub use sequences::{
    check_even_sum_identity, check_odd_sum_identity, ratio, term, term_fast, terms, RecurrenceSpec,
};
pub use verify::{Evaluated, Identity, Verification};
