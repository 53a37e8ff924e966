//! Roots of `x^2 - a x - b` from the quadratic formula, their defining
//! identities, and the positive root of `x^k - a_1 x^{k-1} - ... - a_k`.
//!
//! `phi(a, b)` denotes the plus root `(a + sqrt(a^2 + 4b)) / 2`.
//!
//! Error bounds: `sqrt(a^2 + 4b)` is floored to `digits` places (error in
//! `[0, 1)` ulp, halved by the division by two) and the result is then
//! truncated toward zero (error under 1 ulp), so both roots are within
//! 1.5 ulp, stated as 2 ulp throughout.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{pow10, ulp, FixedReal, Rational};
use crate::verify::{Evaluated, Identity, Verification};

/// Worst-case error of either root, in ulps.
pub const ROOT_ERROR_ULPS: u32 = 2;

/// Tolerance used by the identity checks, in ulps.
pub const IDENTITY_TOLERANCE_ULPS: u32 = 8;

pub fn discriminant(a: &Rational, b: &Rational) -> Rational {
    a * a + Rational::from_integer(BigInt::from(4)) * b
}

fn real_discriminant(a: &Rational, b: &Rational) -> Result<Rational> {
    let d = discriminant(a, b);
    if d.is_negative() {
        return Err(Error::Domain(format!(
            "a^2 + 4b = {d} < 0: complex roots out of scope"
        )));
    }
    Ok(d)
}

fn half_sum(a: &Rational, s: &FixedReal, sign: i8, digits: u32) -> FixedReal {
    let s = s.to_rational();
    let v = if sign > 0 { a + s } else { a - s };
    FixedReal::from_rational(&(v / Rational::from_integer(BigInt::from(2))), digits)
}

/// Plus root `(a + sqrt(a^2 + 4b)) / 2`, within 2 ulp.
pub fn phi(a: &Rational, b: &Rational, digits: u32) -> Result<FixedReal> {
    let d = real_discriminant(a, b)?;
    let s = FixedReal::sqrt(&d, digits)?;
    Ok(half_sum(a, &s, 1, digits))
}

/// Minus root `(a - sqrt(a^2 + 4b)) / 2`, within 2 ulp.
pub fn minus_root(a: &Rational, b: &Rational, digits: u32) -> Result<FixedReal> {
    let d = real_discriminant(a, b)?;
    let s = FixedReal::sqrt(&d, digits)?;
    Ok(half_sum(a, &s, -1, digits))
}

/// Both roots of `x^2 - a x - b` at a common precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRoots {
    pub a: Rational,
    pub b: Rational,
    pub discriminant: Rational,
    pub plus_root: FixedReal,
    pub minus_root: FixedReal,
    pub digits: u32,
}

impl QuadraticRoots {
    pub fn new(a: &Rational, b: &Rational, digits: u32) -> Result<Self> {
        let d = real_discriminant(a, b)?;
        let s = FixedReal::sqrt(&d, digits)?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            plus_root: half_sum(a, &s, 1, digits),
            minus_root: half_sum(a, &s, -1, digits),
            discriminant: d,
            digits,
        })
    }

    /// Bound on `|plus * minus - (-b)|` given the computed roots.
    pub fn product_error_bound(&self) -> Rational {
        product_error_bound(&self.plus_root, &self.minus_root)
    }
}

/// With `e = 2 ulp` on each factor,
/// `|p~ m~ - p m| <= e (|p~| + |m~|) + e^2`.
pub fn product_error_bound(plus: &FixedReal, minus: &FixedReal) -> Rational {
    let e = ulp(plus.digits().min(minus.digits()))
        * Rational::from_integer(BigInt::from(ROOT_ERROR_ULPS));
    &e * (plus.to_rational().abs() + minus.to_rational().abs()) + &e * &e
}

/// Exact sign of `r - phi(a, b)`.
///
/// `r > phi` iff `t = 2r - a > sqrt(D)`, i.e. `t > 0` and `t^2 > D`.
pub fn compare_to_phi(r: &Rational, a: &Rational, b: &Rational) -> Result<Ordering> {
    let d = real_discriminant(a, b)?;
    let t = Rational::from_integer(BigInt::from(2)) * r - a;
    if t.is_negative() {
        return Ok(Ordering::Less);
    }
    Ok((&t * &t).cmp(&d))
}

/// Number of decimal digits of `ceil(x)`, at least 1.
fn decimal_len(x: &Rational) -> u32 {
    let c = x.ceil().to_integer().abs();
    c.to_string().len() as u32
}

/// Extra digits so that perturbing `phi` by its own error, amplified by
/// `sensitivity`, stays far below one ulp at the caller's precision.
fn guard_digits(sensitivity: &Rational) -> u32 {
    decimal_len(&(sensitivity * Rational::from_integer(BigInt::from(16)))) + 2
}

fn approx_check(identity: Identity, lhs: FixedReal, rhs: FixedReal) -> Verification {
    let deviation = lhs.ulps_from(&rhs);
    Verification {
        identity,
        holds: deviation <= BigInt::from(IDENTITY_TOLERANCE_ULPS),
        lhs: Evaluated::Approx(lhs),
        rhs: Evaluated::Approx(rhs),
        summands: Vec::new(),
        tolerance_ulps: Some(IDENTITY_TOLERANCE_ULPS),
        deviation_ulps: Some(deviation),
    }
}

/// Checks `phi = a + b / phi` to within 8 ulp at `digits`.
///
/// The right-hand side is evaluated from `phi` at extra guard digits so
/// that the division's amplification `|b| / phi^2` cannot eat the budget.
pub fn check_reciprocal_identity(a: &Rational, b: &Rational, digits: u32) -> Result<Verification> {
    real_discriminant(a, b)?;
    if b.is_zero() && !a.is_positive() {
        return Err(Error::Precondition(
            "phi(a, b) = 0: the identity phi = a + b/phi requires phi != 0".into(),
        ));
    }
    let lhs = phi(a, b, digits)?;
    if lhs.is_zero() {
        return Err(Error::Precondition(format!(
            "|phi(a, b)| is below 1 ulp at {digits} digits: the identity phi = a + b/phi requires phi != 0"
        )));
    }
    // |phi| > |phi~| - ulp/2 whenever phi~ != 0
    let lower = lhs.to_rational().abs() - ulp(digits) / Rational::from_integer(BigInt::from(2));
    let guard = guard_digits(&(b.abs() / (&lower * &lower)));
    let phi_hi = phi(a, b, digits + guard)?.to_rational();
    let rhs = FixedReal::from_rational(&(a + b / phi_hi), digits);
    Ok(approx_check(Identity::Reciprocal, lhs, rhs))
}

/// Checks `phi = sqrt(b + a phi)` to within 8 ulp at `digits`.
pub fn check_sqrt_identity(a: &Rational, b: &Rational, digits: u32) -> Result<Verification> {
    real_discriminant(a, b)?;
    // phi < 0 exactly when a < 0 and b < 0
    if a.is_negative() && b.is_negative() {
        return Err(Error::Precondition(
            "phi(a, b) < 0 cannot equal a principal square root (negative radicand side)".into(),
        ));
    }
    let lhs = phi(a, b, digits)?;
    if b.is_zero() && !a.is_positive() {
        // phi = 0 = sqrt(0)
        return Ok(approx_check(Identity::Sqrt, lhs, FixedReal::zero(digits)));
    }

    // phi > 0; find a precision where its truncation is nonzero, which is
    // then a lower bound for it.
    let mut p = digits.max(1);
    let lower = loop {
        let approx = phi(a, b, p)?;
        if !approx.is_zero() {
            break approx.to_rational();
        }
        p *= 2;
    };
    let guard = guard_digits(&(a.abs() / lower));
    let phi_hi = phi(a, b, digits + guard)?.to_rational();
    let radicand = b + a * phi_hi;
    if radicand.is_negative() {
        return Err(Error::Precondition(format!(
            "negative radicand b + a*phi = {radicand}"
        )));
    }
    let rhs = FixedReal::sqrt(&radicand, digits + guard)?.truncate(digits);
    Ok(approx_check(Identity::Sqrt, lhs, rhs))
}

/// Sign-exact evaluation of `x^k - a_1 x^{k-1} - ... - a_k` by Horner.
pub fn characteristic_value(coefficients: &[Rational], x: &Rational) -> Rational {
    coefficients
        .iter()
        .fold(Rational::one(), |acc, c| acc * x - c)
}

/// The unique positive root of `x^k - a_1 x^{k-1} - ... - a_k` for
/// strictly positive coefficients, floored to `digits` places.
///
/// Bisects over mantissas `m` of `m / 10^digits` keeping
/// `p(lo) <= 0 < p(hi)`; the bracket starts at `[0, 1 + sum a_i]`.
pub fn dominant_root_k(coefficients: &[Rational], digits: u32) -> Result<FixedReal> {
    if coefficients.is_empty() {
        return Err(Error::Precondition("need at least one coefficient".into()));
    }
    if coefficients.iter().any(|c| !c.is_positive()) {
        return Err(Error::Precondition(
            "all coefficients must be > 0: dominant-root existence not guaranteed".into(),
        ));
    }
    let scale = pow10(digits);
    let sum: Rational = coefficients.iter().sum();
    let mut lo = BigInt::zero();
    let mut hi = ((Rational::one() + sum) * Rational::from_integer(scale.clone()))
        .ceil()
        .to_integer();
    let at = |m: &BigInt| Rational::new(m.clone(), scale.clone());
    debug_assert!(characteristic_value(coefficients, &at(&hi)).is_positive());
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if characteristic_value(coefficients, &at(&mid)).is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(FixedReal::new(lo, digits))
}
