//! Finite continued fractions `a + b/(a + b/(... + b/a))`, truncated nested
//! radicals `sqrt(b + a sqrt(b + ... sqrt(b)))`, and tables tracking how
//! they and the recurrence ratios approach `phi(a, b)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{pow10, FixedReal, Rational};
use crate::roots::{compare_to_phi, discriminant, phi};
use crate::sequences::{ratio, terms, RecurrenceSpec};
use crate::verify::{Evaluated, Identity, Verification};

/// Extra digits used for the target when computing error columns.
const TARGET_GUARD_DIGITS: u32 = 10;

/// A settled radical must match the closed form this closely (in ulps).
pub const RADICAL_AGREEMENT_ULPS: u32 = 4;

/// `a + b/(a + b/(...))` cut off after `depth` partial fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFractionSpec {
    pub a: Rational,
    pub b: Rational,
    pub depth: usize,
}

impl ContinuedFractionSpec {
    pub fn new(a: Rational, b: Rational, depth: usize) -> Self {
        Self { a, b, depth }
    }
}

/// Exact value of the finite continued fraction, folded from the bottom.
pub fn cf_convergent(spec: &ContinuedFractionSpec) -> Result<Rational> {
    let mut value = spec.a.clone();
    for level in 1..=spec.depth {
        if value.is_zero() {
            return Err(Error::ZeroDenominator { level });
        }
        value = &spec.a + &spec.b / value;
    }
    Ok(value)
}

/// Checks that the depth-`d` convergent equals `F_{d+1} / F_d` for the
/// default-seeded `F_n(a, b)`.
pub fn cf_equals_ratio(spec: &ContinuedFractionSpec) -> Result<Verification> {
    let lhs = cf_convergent(spec)?;
    let seq = RecurrenceSpec::two_term(spec.a.clone(), spec.b.clone());
    let rhs = ratio(&seq, spec.depth + 1)?;
    Ok(Verification {
        identity: Identity::CfRatio,
        holds: lhs == rhs,
        lhs: Evaluated::Exact(lhs),
        rhs: Evaluated::Exact(rhs),
        summands: Vec::new(),
        tolerance_ulps: None,
        deviation_ulps: None,
    })
}

/// Extra places carried by the nested-radical iteration.
pub const RADICAL_GUARD_DIGITS: u32 = 6;

/// Once the floored iteration stops moving it sits at most this many
/// working ulps below the exact limit (contraction factor at most 1/2).
const RADICAL_FLOOR_BIAS_ULPS: u32 = 2;

/// State of `x -> sqrt(b + a x)` started from `x_0 = sqrt(b)`.
///
/// Iterates are carried at `digits + RADICAL_GUARD_DIGITS` places with
/// floored square roots, so the working sequence never decreases and never
/// exceeds the limit. [`iterate`](Self::iterate) reports it at `digits`
/// places after adding back the settled floor bias.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalIterationState {
    a: Rational,
    b: Rational,
    working: FixedReal,
    iterate: FixedReal,
    step: usize,
    digits: u32,
}

impl RadicalIterationState {
    pub fn new(a: &Rational, b: &Rational, digits: u32) -> Result<Self> {
        if a.is_negative() || b.is_negative() {
            return Err(Error::Precondition(format!(
                "nested radical needs a >= 0 and b >= 0 (got a = {a}, b = {b})"
            )));
        }
        let working = FixedReal::sqrt(b, digits + RADICAL_GUARD_DIGITS)?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            iterate: Self::report(&working, digits),
            working,
            step: 0,
            digits,
        })
    }

    fn report(working: &FixedReal, digits: u32) -> FixedReal {
        let biased = FixedReal::new(
            working.mantissa() + BigInt::from(RADICAL_FLOOR_BIAS_ULPS),
            working.digits(),
        );
        biased.truncate(digits)
    }

    /// Current iterate at `digits` places.
    pub fn iterate(&self) -> &FixedReal {
        &self.iterate
    }

    /// Current iterate at working precision.
    pub fn working(&self) -> &FixedReal {
        &self.working
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// One more level of nesting.
    pub fn advance(&mut self) -> Result<&FixedReal> {
        let radicand = &self.b + &self.a * self.working.to_rational();
        self.working = FixedReal::sqrt(&radicand, self.working.digits())?;
        self.iterate = Self::report(&self.working, self.digits);
        self.step += 1;
        Ok(&self.iterate)
    }
}

/// Depth-`steps` truncation of the nested radical at `digits` places.
pub fn radical_iterate(a: &Rational, b: &Rational, steps: usize, digits: u32) -> Result<FixedReal> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Precondition(
            "nested radical needs a and b not both zero".into(),
        ));
    }
    let mut state = RadicalIterationState::new(a, b, digits)?;
    for _ in 0..steps {
        state.advance()?;
    }
    Ok(state.iterate)
}

/// Step budget for [`radical_converged`]: `10 + 4 * working digits`.
pub fn radical_step_cap(digits: u32) -> usize {
    10 + 4 * (digits + RADICAL_GUARD_DIGITS) as usize
}

/// Iterates the nested radical until the working iterate stops moving
/// (the floored sequence is monotone and bounded, so it always does),
/// then checks the result against the closed-form
/// `phi(a, b)`.
///
/// Returns the settled iterate and the number of steps taken.
pub fn radical_converged(a: &Rational, b: &Rational, digits: u32) -> Result<(FixedReal, usize)> {
    if a.is_negative() || b.is_negative() {
        return Err(Error::Precondition(format!(
            "nested radical needs a >= 0 and b >= 0 (got a = {a}, b = {b})"
        )));
    }
    let mut state = RadicalIterationState::new(a, b, digits)?;
    if a.is_zero() {
        state.advance()?;
        return Ok((state.iterate, 1));
    }
    let cap = radical_step_cap(digits);
    let expected = phi(a, b, digits)?;
    let mut previous = state.clone();
    while state.step < cap {
        state.advance()?;
        if state.working == previous.working {
            if state.iterate.ulps_from(&expected) > RADICAL_AGREEMENT_ULPS.into() {
                return Err(Error::WrongLimit {
                    steps: state.step,
                    value: state.iterate,
                    expected,
                    tolerance_ulps: RADICAL_AGREEMENT_ULPS,
                });
            }
            return Ok((state.iterate, state.step));
        }
        previous = state.clone();
    }
    Err(Error::NoConvergence {
        steps: state.step,
        previous: previous.iterate,
        last: state.iterate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub index: usize,
    /// `None` when the row is undefined (zero denominator).
    pub value: Option<Evaluated>,
    pub decimal: Option<FixedReal>,
    pub abs_error: Option<FixedReal>,
}

impl ReportRow {
    fn undefined(index: usize) -> Self {
        Self {
            index,
            value: None,
            decimal: None,
            abs_error: None,
        }
    }
}

/// Rows of successive approximations to `phi(a, b)` with their errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub rows: Vec<ReportRow>,
    pub target: FixedReal,
    pub digits: u32,
    /// Whether convergence to the target is a theorem for these inputs.
    pub convergence_guaranteed: bool,
    /// First row index from which the error column never increases, if
    /// that tail spans at least three defined rows and ends strictly lower
    /// than it starts (or is all zero).
    pub decreasing_from: Option<usize>,
}

impl ConvergenceReport {
    pub fn eventually_decreasing(&self) -> bool {
        self.decreasing_from.is_some()
    }

    pub fn row(&self, index: usize) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.index == index)
    }
}

fn decreasing_tail(rows: &[ReportRow]) -> Option<usize> {
    let defined: Vec<(usize, &FixedReal)> = rows
        .iter()
        .filter_map(|r| r.abs_error.as_ref().map(|e| (r.index, e)))
        .collect();
    if defined.is_empty() {
        return None;
    }
    let mut start = defined.len() - 1;
    while start > 0 && defined[start - 1].1.cmp_value(defined[start].1) != Ordering::Less {
        start -= 1;
    }
    let tail = &defined[start..];
    let first = tail[0].1;
    let last = tail[tail.len() - 1].1;
    let ends_lower = last.cmp_value(first) == Ordering::Less || first.is_zero();
    (tail.len() >= 3 && ends_lower).then_some(tail[0].0)
}

struct Target {
    shown: FixedReal,
    /// `phi` at `digits + TARGET_GUARD_DIGITS` places.
    precise: FixedReal,
    digits: u32,
}

impl Target {
    fn new(a: &Rational, b: &Rational, digits: u32) -> Result<Self> {
        Ok(Self {
            shown: phi(a, b, digits)?,
            precise: phi(a, b, digits + TARGET_GUARD_DIGITS)?,
            digits,
        })
    }

    fn row(&self, index: usize, value: Evaluated) -> ReportRow {
        let exact = value.to_rational();
        let (p, q) = (exact.numer(), exact.denom());
        // |p/q - m/10^g| = |p 10^g - m q| / (q 10^g), kept unreduced
        let scale = pow10(self.precise.digits());
        let gap = (p * &scale - self.precise.mantissa() * q).abs();
        let den = q * scale;
        ReportRow {
            index,
            decimal: Some(FixedReal::from_rational(&exact, self.digits)),
            abs_error: Some(FixedReal::from_fraction(&gap, &den, self.digits).expect("q > 0")),
            value: Some(value),
        }
    }

    fn report(self, rows: Vec<ReportRow>, convergence_guaranteed: bool) -> ConvergenceReport {
        ConvergenceReport {
            decreasing_from: decreasing_tail(&rows),
            rows,
            target: self.shown,
            digits: self.digits,
            convergence_guaranteed,
        }
    }
}

fn plus_root_dominates(a: &Rational, b: &Rational) -> bool {
    a.is_positive() && discriminant(a, b).is_positive()
}

/// Whether `F_n / F_{n-1}` provably tends to `phi(a, b)`: the plus root
/// must strictly dominate and the seeds must not lie entirely along the
/// minus root (`F_1 = mu F_0`).
pub fn ratios_converge(spec: &RecurrenceSpec) -> bool {
    let Some((a, b)) = spec.pair() else {
        return false;
    };
    if !plus_root_dominates(a, b) {
        return false;
    }
    let (f0, f1) = (&spec.seeds()[0], &spec.seeds()[1]);
    if f0.is_zero() {
        return !f1.is_zero();
    }
    let r = f1 / f0;
    let on_minus_root =
        (&r * &r - a * &r - b).is_zero() && compare_to_phi(&r, a, b) == Ok(Ordering::Less);
    !on_minus_root
}

/// Rows `n = 1..=n_max` of `F_n / F_{n-1}` against `phi(a, b)` for a
/// two-term recurrence. Rows with `F_{n-1} = 0` are left undefined.
pub fn ratio_convergence_table(
    spec: &RecurrenceSpec,
    n_max: usize,
    digits: u32,
) -> Result<ConvergenceReport> {
    let (a, b) = spec
        .pair()
        .ok_or_else(|| Error::Precondition("ratio tables need a two-term recurrence".into()))?;
    if n_max < 1 {
        return Err(Error::Precondition("ratio tables need n_max >= 1".into()));
    }
    let target = Target::new(a, b, digits)?;
    let all = terms(spec, n_max);
    let rows = (1..=n_max)
        .map(|n| {
            if all[n - 1].is_zero() {
                ReportRow::undefined(n)
            } else {
                target.row(n, Evaluated::Exact(&all[n] / &all[n - 1]))
            }
        })
        .collect();
    Ok(target.report(rows, ratios_converge(spec)))
}

/// Rows `d = 0..=max_depth` of continued-fraction convergents.
pub fn cf_convergence_table(
    a: &Rational,
    b: &Rational,
    max_depth: usize,
    digits: u32,
) -> Result<ConvergenceReport> {
    let target = Target::new(a, b, digits)?;
    let mut rows = Vec::with_capacity(max_depth + 1);
    let mut value = a.clone();
    for depth in 0..=max_depth {
        if depth > 0 {
            if value.is_zero() {
                return Err(Error::ZeroDenominator { level: depth });
            }
            value = a + b / value;
        }
        rows.push(target.row(depth, Evaluated::Exact(value.clone())));
    }
    Ok(target.report(rows, plus_root_dominates(a, b)))
}

/// Rows `k = 0..=steps` of nested-radical iterates.
pub fn radical_convergence_table(
    a: &Rational,
    b: &Rational,
    steps: usize,
    digits: u32,
) -> Result<ConvergenceReport> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Precondition(
            "nested radical needs a and b not both zero".into(),
        ));
    }
    let target = Target::new(a, b, digits)?;
    let mut state = RadicalIterationState::new(a, b, digits)?;
    let mut rows = vec![target.row(0, Evaluated::Approx(state.iterate.clone()))];
    for k in 1..=steps {
        let x = state.advance()?.clone();
        rows.push(target.row(k, Evaluated::Approx(x)));
    }
    // from x_0 = sqrt(b) the iterates climb to phi when a > 0, b > 0
    let guaranteed = a.is_positive() && b.is_positive();
    Ok(target.report(rows, guaranteed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rational, ulp};
    use crate::sequences::term;

    fn cf(a: i64, b: i64, depth: usize) -> Result<Rational> {
        cf_convergent(&ContinuedFractionSpec::new(int(a), int(b), depth))
    }

    /// Top-down oracle: expand the nested expression recursively.
    fn cf_recursive(a: &Rational, b: &Rational, depth: usize) -> Rational {
        if depth == 0 {
            a.clone()
        } else {
            a + b / cf_recursive(a, b, depth - 1)
        }
    }

    #[test]
    fn convergent_examples() {
        assert_eq!(cf(1, 1, 3).unwrap(), rational(5, 3));
        assert_eq!(cf(1, 1, 0).unwrap(), int(1));
        // 2, 5/2, 12/5, 29/12, 70/29
        assert_eq!(cf(2, 1, 4).unwrap(), rational(70, 29));
        assert_eq!(cf_recursive(&int(2), &int(1), 4), rational(70, 29));
        assert_eq!(term(&RecurrenceSpec::two_term(int(2), int(1)), 5), int(70));
    }

    #[test]
    fn zero_denominator_reports_level() {
        // a = 0: innermost b/a divides by zero
        assert_eq!(cf(0, 1, 2), Err(Error::ZeroDenominator { level: 1 }));
        // a = 1, b = -1: 1, 0, ...
        assert_eq!(cf(1, -1, 3), Err(Error::ZeroDenominator { level: 2 }));
        assert_eq!(cf(0, 1, 0).unwrap(), int(0));
    }

    #[test]
    fn cf_ratio_examples() {
        let v = cf_equals_ratio(&ContinuedFractionSpec::new(int(1), int(1), 3)).unwrap();
        assert!(v.holds);
        assert_eq!(v.to_string(), "5/3 = 5/3");
        assert!(
            cf_equals_ratio(&ContinuedFractionSpec::new(int(1), int(1), 0))
                .unwrap()
                .holds
        );
        assert!(
            cf_equals_ratio(&ContinuedFractionSpec::new(int(3), int(2), 25))
                .unwrap()
                .holds
        );
        assert!(
            cf_equals_ratio(&ContinuedFractionSpec::new(
                rational(-2, 3),
                rational(5, 7),
                30
            ))
            .unwrap()
            .holds
        );
    }

    #[test]
    fn radical_examples() {
        assert_eq!(
            radical_iterate(&int(1), &int(1), 0, 4).unwrap().to_string(),
            "1.0000"
        );
        assert_eq!(
            radical_iterate(&int(1), &int(1), 60, 4)
                .unwrap()
                .to_string(),
            "1.6180"
        );
        assert_eq!(
            radical_iterate(&int(2), &int(3), 80, 6)
                .unwrap()
                .to_string(),
            "3.000000"
        );
        assert!(matches!(
            radical_iterate(&int(-1), &int(1), 3, 4),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            radical_iterate(&int(1), &int(-1), 3, 4),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            radical_iterate(&int(0), &int(0), 3, 4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn radical_state_counts_steps() {
        let mut s = RadicalIterationState::new(&int(1), &int(1), 6).unwrap();
        assert_eq!(s.step(), 0);
        s.advance().unwrap();
        s.advance().unwrap();
        assert_eq!(s.step(), 2);
        // sqrt(1 + sqrt(2)) = 1.553773...
        assert_eq!(s.iterate().to_string(), "1.553773");
    }

    #[test]
    fn radical_converged_examples() {
        let (v, _) = radical_converged(&int(1), &int(1), 4).unwrap();
        let target = phi(&int(1), &int(1), 4).unwrap();
        assert!(v.ulps_from(&target) <= BigInt::from(4));
        assert!(v.to_string().starts_with("1.618"));

        let (v, steps) = radical_converged(&int(0), &int(9), 3).unwrap();
        assert_eq!(v.to_string(), "3.000");
        assert_eq!(steps, 1);

        let (v, steps) = radical_converged(&int(1), &int(1), 50).unwrap();
        assert!(v.ulps_from(&phi(&int(1), &int(1), 50).unwrap()) <= BigInt::from(4));
        assert!(steps <= radical_step_cap(50));
    }

    #[test]
    fn radical_from_zero_seed_stalls_at_zero() {
        // b = 0 starts at x_0 = 0, a fixed point of sqrt(a x)
        let err = radical_converged(&int(4), &int(0), 6).unwrap_err();
        assert!(matches!(err, Error::WrongLimit { .. }), "{err}");
    }

    #[test]
    fn radical_iterates_increase_toward_phi() {
        for (a, b) in [(1, 1), (3, 2), (1, 7), (10, 1)] {
            let (a, b) = (int(a), int(b));
            let bound = phi(&a, &b, 30).unwrap().to_rational() + ulp(30);
            let mut s = RadicalIterationState::new(&a, &b, 30).unwrap();
            let mut prev = s.iterate().clone();
            for _ in 0..150 {
                let next = s.advance().unwrap().clone();
                assert!(next.cmp_value(&prev) != Ordering::Less);
                assert!(next.to_rational() <= bound);
                assert!(!next.is_negative());
                prev = next;
            }
        }
    }

    #[test]
    fn ratio_table_classic() {
        let report = ratio_convergence_table(&RecurrenceSpec::classic(), 10, 4).unwrap();
        let decimals: Vec<String> = report
            .rows
            .iter()
            .take(5)
            .map(|r| r.decimal.as_ref().unwrap().to_string())
            .collect();
        assert_eq!(decimals, ["1.0000", "2.0000", "1.5000", "1.6666", "1.6000"]);
        let row10 = report.row(10).unwrap();
        assert_eq!(row10.value, Some(Evaluated::Exact(rational(89, 55))));
        assert_eq!(row10.decimal.as_ref().unwrap().to_string(), "1.6181");
        assert_eq!(report.target.to_string(), "1.6180");
        assert!(report.convergence_guaranteed);
        assert!(report.eventually_decreasing());
        assert_eq!(
            report.rows[0].abs_error.as_ref().unwrap().to_string(),
            "0.6180"
        );
    }

    #[test]
    fn ratio_table_degenerate_geometric() {
        let spec = RecurrenceSpec::two_term(int(1), int(0));
        let report = ratio_convergence_table(&spec, 6, 4).unwrap();
        for row in &report.rows {
            assert_eq!(row.value, Some(Evaluated::Exact(int(1))));
            assert_eq!(row.abs_error.as_ref().unwrap().to_string(), "0.0000");
        }
    }

    #[test]
    fn ratio_table_undefined_rows_and_oscillation() {
        // a = 0: 1, 0, 2, 0, 4, ... never settles
        let spec = RecurrenceSpec::two_term(int(0), int(2));
        let report = ratio_convergence_table(&spec, 8, 6).unwrap();
        assert!(report.row(2).unwrap().value.is_none());
        assert_eq!(report.row(3).unwrap().value, Some(Evaluated::Exact(int(0))));
        assert!(!report.convergence_guaranteed);
        assert!(!report.eventually_decreasing());
    }

    #[test]
    fn seeds_on_minus_root_do_not_converge() {
        // x^2 - x - 2 = (x - 2)(x + 1); seeds 1, -1 follow (-1)^n
        let spec = RecurrenceSpec::two_term(int(1), int(2))
            .with_seeds(vec![int(1), int(-1)])
            .unwrap();
        assert!(!ratios_converge(&spec));
        let report = ratio_convergence_table(&spec, 20, 6).unwrap();
        assert!(report
            .rows
            .iter()
            .all(|r| r.value == Some(Evaluated::Exact(int(-1)))));
        assert!(!report.eventually_decreasing());
        assert!(ratios_converge(&RecurrenceSpec::two_term(int(1), int(2))));
    }

    #[test]
    fn ratio_table_rejects_bad_input() {
        let k3 = RecurrenceSpec::new(vec![int(1); 3], vec![int(1); 3]).unwrap();
        assert!(ratio_convergence_table(&k3, 5, 4).is_err());
        assert!(ratio_convergence_table(&RecurrenceSpec::classic(), 0, 4).is_err());
        let complex = RecurrenceSpec::two_term(int(1), int(-1));
        assert!(matches!(
            ratio_convergence_table(&complex, 5, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn golden_ratios_oscillate() {
        let all = terms(&RecurrenceSpec::classic(), 80);
        for n in 1..=80 {
            let r = &all[n] / &all[n - 1];
            let expected = if n % 2 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
            assert_eq!(
                compare_to_phi(&r, &int(1), &int(1)).unwrap(),
                expected,
                "n = {n}"
            );
        }
    }

    #[test]
    fn cf_table_examples() {
        let report = cf_convergence_table(&int(1), &int(1), 4, 4).unwrap();
        let values: Vec<Option<Evaluated>> = report.rows.iter().map(|r| r.value.clone()).collect();
        let expected = [
            int(1),
            int(2),
            rational(3, 2),
            rational(5, 3),
            rational(8, 5),
        ];
        assert_eq!(values, expected.map(|v| Some(Evaluated::Exact(v))));

        let single = cf_convergence_table(&int(1), &int(1), 0, 4).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(
            single.rows[0].abs_error.as_ref().unwrap().to_string(),
            "0.6180"
        );

        let report = cf_convergence_table(&int(3), &int(2), 20, 30).unwrap();
        for w in report.rows[1..].windows(2) {
            let (e0, e1) = (
                w[0].abs_error.as_ref().unwrap(),
                w[1].abs_error.as_ref().unwrap(),
            );
            assert_eq!(e1.cmp_value(e0), Ordering::Less, "row {}", w[1].index);
        }
        assert_eq!(report.decreasing_from, Some(0));
    }

    #[test]
    fn cf_table_propagates_zero_denominator() {
        // with real roots only the innermost level can vanish (a = 0)
        assert_eq!(
            cf_convergence_table(&int(0), &int(1), 5, 4),
            Err(Error::ZeroDenominator { level: 1 })
        );
    }

    #[test]
    fn radical_table_rows() {
        let report = radical_convergence_table(&int(1), &int(1), 40, 8).unwrap();
        assert_eq!(report.rows.len(), 41);
        assert_eq!(
            report.rows[0].decimal.as_ref().unwrap().to_string(),
            "1.00000000"
        );
        assert!(report.eventually_decreasing());
        assert!(report.convergence_guaranteed);
    }
}
