use thiserror::Error;

use crate::numerics::FixedReal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A continued fraction hit a zero denominator while being folded.
    /// `level` counts partial fractions from the bottom (innermost = 1).
    #[error("division by zero at continued-fraction level {level}")]
    ZeroDenominator { level: usize },

    #[error("no convergence after {steps} steps (last iterates {previous} and {last})")]
    NoConvergence {
        steps: usize,
        previous: FixedReal,
        last: FixedReal,
    },

    /// Iteration settled, but away from the closed-form value.
    #[error("iteration settled at {value} after {steps} steps, expected {expected} within {tolerance_ulps} ulp")]
    WrongLimit {
        steps: usize,
        value: FixedReal,
        expected: FixedReal,
        tolerance_ulps: u32,
    },

    #[error("cannot parse rational literal {0:?} (expected \"p\" or \"p/q\")")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
