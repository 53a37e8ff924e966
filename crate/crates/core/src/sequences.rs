//! Linear recurrences `F_n = a_1 F_{n-1} + ... + a_k F_{n-k}` over exact
//! rationals, with the classic sequence seeded `F_0 = F_1 = 1`.

use num_integer::Integer as _;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::numerics::{checked_div, Integer, Rational};
use crate::verify::{Evaluated, Identity, Verification};

/// Coefficients `a_1..a_k` and seeds `F_0..F_{k-1}` of a k-term recurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSpec {
    coefficients: Vec<Rational>,
    seeds: Vec<Rational>,
}

impl RecurrenceSpec {
    pub fn new(coefficients: Vec<Rational>, seeds: Vec<Rational>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Precondition(
                "a recurrence needs at least one coefficient".into(),
            ));
        }
        if coefficients.len() != seeds.len() {
            return Err(Error::Precondition(format!(
                "{} coefficients but {} seeds",
                coefficients.len(),
                seeds.len()
            )));
        }
        Ok(Self {
            coefficients,
            seeds,
        })
    }

    /// `F_n(a, b) = a F_{n-1} + b F_{n-2}` seeded with `F_0 = 1, F_1 = a`.
    pub fn two_term(a: Rational, b: Rational) -> Self {
        let seeds = vec![Rational::one(), a.clone()];
        Self {
            coefficients: vec![a, b],
            seeds,
        }
    }

    /// `F_0 = F_1 = 1`, `F_n = F_{n-1} + F_{n-2}`.
    pub fn classic() -> Self {
        Self::two_term(Rational::one(), Rational::one())
    }

    pub fn with_seeds(&self, seeds: Vec<Rational>) -> Result<Self> {
        Self::new(self.coefficients.clone(), seeds)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn seeds(&self) -> &[Rational] {
        &self.seeds
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// `(a, b)` for a two-term recurrence.
    pub fn pair(&self) -> Option<(&Rational, &Rational)> {
        match self.coefficients.as_slice() {
            [a, b] => Some((a, b)),
            _ => None,
        }
    }

    fn next_term(&self, window: &[Rational]) -> Rational {
        // window holds the last k terms, oldest first
        self.coefficients
            .iter()
            .zip(window.iter().rev())
            .fold(Rational::zero(), |acc, (c, f)| acc + c * f)
    }
}

/// `F_n` by forward iteration.
pub fn term(spec: &RecurrenceSpec, n: usize) -> Rational {
    let k = spec.order();
    if n < k {
        return spec.seeds[n].clone();
    }
    let mut window = spec.seeds.clone();
    for _ in k..=n {
        let next = spec.next_term(&window);
        window.rotate_left(1);
        window[k - 1] = next;
    }
    window.pop().expect("order is at least one")
}

/// `[F_0, ..., F_{n_max}]` in one pass.
pub fn terms(spec: &RecurrenceSpec, n_max: usize) -> Vec<Rational> {
    let k = spec.order();
    let mut out: Vec<Rational> = spec.seeds.iter().take(n_max + 1).cloned().collect();
    while out.len() <= n_max {
        let next = spec.next_term(&out[out.len() - k..]);
        out.push(next);
    }
    out
}

type Matrix = Vec<Vec<Integer>>;

fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let k = x.len();
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    (0..k)
                        .filter(|&l| !x[i][l].is_zero() && !y[l][j].is_zero())
                        .fold(Integer::zero(), |acc, l| acc + &x[i][l] * &y[l][j])
                })
                .collect()
        })
        .collect()
}

fn identity(k: usize) -> Matrix {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        Integer::one()
                    } else {
                        Integer::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// `F_n` via exponentiation by squaring of the k x k companion matrix.
///
/// With state `v_m = (F_{m+k-1}, ..., F_m)`, `v_{m+1} = C v_m` where the
/// first row of `C` holds the coefficients and the subdiagonal is ones.
/// The power is taken over integers as `(L C)^n / L^n`, `L` the lcm of the
/// coefficient denominators.
pub fn term_fast(spec: &RecurrenceSpec, n: usize) -> Rational {
    let k = spec.order();
    if n < k {
        return spec.seeds[n].clone();
    }
    let scale = spec
        .coefficients
        .iter()
        .fold(Integer::one(), |l, c| l.lcm(c.denom()));
    let mut companion = vec![vec![Integer::zero(); k]; k];
    companion[0] = spec
        .coefficients
        .iter()
        .map(|c| (c * &scale).to_integer())
        .collect();
    for i in 1..k {
        companion[i][i - 1] = scale.clone();
    }

    let mut power = identity(k);
    let mut base = companion;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            power = mat_mul(&power, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }

    // F_n is the last component of C^n v_0, v_0 = (F_{k-1}, ..., F_0).
    let sum = power[k - 1]
        .iter()
        .zip(spec.seeds.iter().rev())
        .fold(Rational::zero(), |acc, (p, s)| {
            acc + s * Rational::from_integer(p.clone())
        });
    sum / Rational::from_integer(Pow::pow(scale, n))
}

/// `F_n / F_{n-1}`.
pub fn ratio(spec: &RecurrenceSpec, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Precondition("ratio needs n >= 1".into()));
    }
    let prev = term(spec, n - 1);
    if prev.is_zero() {
        return Err(Error::Domain(format!(
            "F_{} is zero, ratio F_{n}/F_{} undefined",
            n - 1,
            n - 1
        )));
    }
    checked_div(&term(spec, n), &prev)
}

fn sum_identity(
    identity: Identity,
    n: usize,
    indices: impl Iterator<Item = usize>,
) -> Verification {
    let spec = RecurrenceSpec::classic();
    let all = terms(&spec, n);
    let summands: Vec<Rational> = indices.map(|i| all[i].clone()).collect();
    let rhs: Rational = summands.iter().sum();
    let lhs = all[n].clone();
    Verification {
        identity,
        holds: lhs == rhs,
        lhs: Evaluated::Exact(lhs),
        rhs: Evaluated::Exact(rhs),
        summands,
        tolerance_ulps: None,
        deviation_ulps: None,
    }
}

/// `F_N = F_0 + F_2 + ... + F_{N-1}` for odd `N` (classic sequence).
pub fn check_odd_sum_identity(n: usize) -> Result<Verification> {
    if n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "N = {n} is even; use the even-sum identity"
        )));
    }
    Ok(sum_identity(Identity::OddSum, n, (0..n).step_by(2)))
}

/// `F_N = F_0 + F_1 + F_3 + ... + F_{N-1}` for even `N >= 2` (classic
/// sequence).
pub fn check_even_sum_identity(n: usize) -> Result<Verification> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::Precondition(format!(
            "N = {n} must be even and at least 2; use the odd-sum identity for odd N"
        )));
    }
    let indices = std::iter::once(0).chain((1..n).step_by(2));
    Ok(sum_identity(Identity::EvenSum, n, indices))
}
