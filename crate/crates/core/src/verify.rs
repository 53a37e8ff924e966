use std::fmt;

use crate::numerics::{FixedReal, Integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `F_N = F_0 + F_2 + ... + F_{N-1}`, N odd.
    OddSum,
    /// `F_N = F_0 + F_1 + F_3 + ... + F_{N-1}`, N even.
    EvenSum,
    /// `phi = a + b / phi`.
    Reciprocal,
    /// `phi = sqrt(b + a phi)`.
    Sqrt,
    /// depth-d convergent of `a + b/(a + b/(...))` equals `F_{d+1} / F_d`.
    CfRatio,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::OddSum,
        Identity::EvenSum,
        Identity::Reciprocal,
        Identity::Sqrt,
        Identity::CfRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::OddSum => "odd-sum",
            Identity::EvenSum => "even-sum",
            Identity::Reciprocal => "reciprocal",
            Identity::Sqrt => "sqrt",
            Identity::CfRatio => "cf-ratio",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|i| i.name() == name)
    }
}

/// A value that is either exact or a truncated decimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluated {
    Exact(Rational),
    Approx(FixedReal),
}

impl Evaluated {
    pub fn to_rational(&self) -> Rational {
        match self {
            Evaluated::Exact(r) => r.clone(),
            Evaluated::Approx(f) => f.to_rational(),
        }
    }
}

impl fmt::Display for Evaluated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluated::Exact(r) => write!(f, "{r}"),
            Evaluated::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// Outcome of checking an identity, carrying both evaluated sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub identity: Identity,
    pub holds: bool,
    pub lhs: Evaluated,
    pub rhs: Evaluated,
    /// Terms summed on the right-hand side of the sum identities.
    pub summands: Vec<Rational>,
    /// `None` for exact comparisons.
    pub tolerance_ulps: Option<u32>,
    pub deviation_ulps: Option<Integer>,
}

impl fmt::Display for Verification {
    /// `8 = 1+2+5` for sums, `lhs = rhs` otherwise; `!=` when it fails.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.holds { "=" } else { "!=" };
        write!(f, "{} {rel} ", self.lhs)?;
        if self.summands.is_empty() {
            write!(f, "{}", self.rhs)
        } else {
            let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join("+"))
        }
    }
}
