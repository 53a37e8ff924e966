//! Exact integer and rational arithmetic plus a truncating decimal
//! fixed-point type.
//!
//! `Integer` and `Rational` are the `num` big-number types. Rationals are
//! always stored reduced with a positive denominator, so structural equality
//! is value equality. `FixedReal` is a scaled integer `mantissa * 10^-digits`;
//! every constructor truncates toward zero and states its error in ulps
//! (1 ulp = `10^-digits`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// `p / q` reduced. Panics if `q == 0`; use [`checked_div`] for fallible input.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn checked_div(x: &Rational, y: &Rational) -> Result<Rational> {
    if y.is_zero() {
        return Err(Error::Domain("division by zero".into()));
    }
    Ok(x / y)
}

/// Parses `"p"` or `"p/q"` with optional leading sign on `p`. Decimal
/// literals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse(s.to_string());
    let s_trim = s.trim();
    let (num, den) = match s_trim.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s_trim, None),
    };
    let valid_digits = |t: &str, signed: bool| {
        let body = if signed {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_digits(num, true) {
        return Err(err());
    }
    let p = BigInt::from_str(num).map_err(|_| err())?;
    let q = match den {
        Some(d) => {
            if !valid_digits(d, false) {
                return Err(err());
            }
            BigInt::from_str(d).map_err(|_| err())?
        }
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(p, q))
}

pub fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), exp as usize)
}

/// Floor square root by integer Newton iteration.
///
/// The initial guess `2^ceil(bits/2)` is never below the root, and from
/// above the iteration decreases strictly until it reaches `floor(sqrt(n))`.
pub fn isqrt(n: &Integer) -> Result<Integer> {
    if n.is_negative() {
        return Err(Error::Domain(format!(
            "square root of negative integer {n}"
        )));
    }
    if n.is_zero() {
        return Ok(BigInt::zero());
    }
    let bits = n.bits();
    let mut x = BigInt::one() << bits.div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return Ok(x);
        }
        x = y;
    }
}

/// Decimal fixed-point number `mantissa * 10^-digits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedReal {
    mantissa: Integer,
    digits: u32,
}

impl FixedReal {
    pub fn new(mantissa: Integer, digits: u32) -> Self {
        Self { mantissa, digits }
    }

    pub fn zero(digits: u32) -> Self {
        Self::new(BigInt::zero(), digits)
    }

    pub fn mantissa(&self) -> &Integer {
        &self.mantissa
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn ulp(&self) -> Rational {
        ulp(self.digits)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::new(self.mantissa.abs(), self.digits)
    }

    /// The exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mantissa.clone(), pow10(self.digits))
    }

    /// Truncates `x` toward zero to `digits` decimals. Error in (-1, 1) ulp.
    pub fn from_rational(x: &Rational, digits: u32) -> Self {
        // BigInt division truncates toward zero.
        let m = x.numer() * pow10(digits) / x.denom();
        Self::new(m, digits)
    }

    /// Truncates `numer / denom` toward zero without reducing the fraction.
    pub fn from_fraction(numer: &Integer, denom: &Integer, digits: u32) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Self::new(numer * pow10(digits) / denom, digits))
    }

    /// Floor of `sqrt(x)` to `digits` decimals. Error in [0, 1) ulp.
    ///
    /// Uses `floor(sqrt(floor(y))) == floor(sqrt(y))` for `y >= 0`.
    pub fn sqrt(x: &Rational, digits: u32) -> Result<Self> {
        if x.is_negative() {
            return Err(Error::Domain(format!("square root of negative value {x}")));
        }
        let scaled = x.numer() * pow10(2 * digits) / x.denom();
        Ok(Self::new(isqrt(&scaled)?, digits))
    }

    /// Truncates toward zero to fewer digits; identity if `digits` is not
    /// smaller than the current precision.
    pub fn truncate(&self, digits: u32) -> Self {
        if digits >= self.digits {
            return self.clone();
        }
        let m = &self.mantissa / pow10(self.digits - digits);
        Self::new(m, digits)
    }

    /// Lossless widening to more digits.
    pub fn widen(&self, digits: u32) -> Self {
        if digits <= self.digits {
            return self.clone();
        }
        Self::new(&self.mantissa * pow10(digits - self.digits), digits)
    }

    /// Distance `|self - other|` in ulps of the finer of the two precisions.
    pub fn ulps_from(&self, other: &FixedReal) -> Integer {
        let d = self.digits.max(other.digits);
        (self.widen(d).mantissa - other.widen(d).mantissa).abs()
    }

    /// Distance from an exact value, in ulps of `self`, rounded up.
    pub fn ulps_from_exact(&self, exact: &Rational) -> Integer {
        let diff =
            ((self.to_rational() - exact) * Rational::from_integer(pow10(self.digits))).abs();
        diff.ceil().to_integer()
    }

    pub fn cmp_value(&self, other: &FixedReal) -> Ordering {
        let d = self.digits.max(other.digits);
        self.widen(d).mantissa.cmp(&other.widen(d).mantissa)
    }
}

pub fn ulp(digits: u32) -> Rational {
    Rational::new(BigInt::one(), pow10(digits))
}

impl fmt::Display for FixedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (int_part, frac_part) = self.mantissa.abs().div_rem(&pow10(self.digits));
        if self.mantissa.sign() == Sign::Minus {
            f.write_str("-")?;
        }
        write!(f, "{int_part}")?;
        if self.digits > 0 {
            write!(f, ".{:0>width$}", frac_part, width = self.digits as usize)?;
        }
        Ok(())
    }
}
