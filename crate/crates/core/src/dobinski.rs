//! Dobiński-type series for Bell numbers, with certified truncation bounds.
//!
//! Every series here has terms of the form `P(k) / k!`-like rationals, so the
//! partial sums are computed exactly and only the overall factor `1/e` (and the
//! final rounding to the working precision) introduces error. The series are:
//!
//! * classical: `B(n) = (1/e) Σ_k k^n / k!`;
//! * diagonal: `B_{r,r}(n) = (1/e) Σ_k (1/k!) [(k+r)!/k!]^{n-1}`;
//! * general `r > s`: `B_{r,s}(n) = ((r-s)^{s(n-1)}/e) Σ_k (1/k!) Π_{j=1}^{s}
//!   Γ(n + (k+j)/(r-s)) / Γ(1 + (k+j)/(r-s))`;
//! * the `rFr` family for `B_{pr+p,pr}(n)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinat::{factorial, falling};
use crate::operator::MonomialSpec;
use crate::real::{scale_by_inv_e, sum_positive_series, sum_with_cutoff, ErrorBoundedReal, TruncatedSum};
use crate::{Error, Result};

pub const DEFAULT_BITS: u32 = 256;
pub const MAX_BITS: u32 = 4096;

/// Working precision and error target for one series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSpec {
    pub working_precision: u32,
    pub target_abs_error: f64,
}

impl Default for SeriesSpec {
    fn default() -> Self {
        SeriesSpec { working_precision: DEFAULT_BITS, target_abs_error: 1e-9 }
    }
}

impl SeriesSpec {
    pub fn new(working_precision: u32, target_abs_error: f64) -> Result<Self> {
        let spec = SeriesSpec { working_precision, target_abs_error };
        spec.target()?;
        Ok(spec)
    }

    fn target(&self) -> Result<BigRational> {
        if !self.target_abs_error.is_finite() || self.target_abs_error <= 0.0 {
            return Err(Error::InvalidArgument("target_abs_error must be positive and finite"));
        }
        if self.working_precision == 0 {
            return Err(Error::InvalidArgument("working_precision must be positive"));
        }
        Ok(BigRational::from_float(self.target_abs_error).expect("finite"))
    }
}

/// Which form of the general `r > s` series to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeneralForm {
    /// With the `1/k!` weight; converges to `B_{r,s}(n)`.
    #[default]
    Corrected,
    /// Without `1/k!`; the terms never decay and summation reports
    /// [`Error::Divergent`].
    Printed,
}

/// Prefactor of the `rFr` representation of `B_{pr+p,pr}(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HypergeometricPrefactor {
    /// `Π_{j=1}^{r} (p(n-1) + pj)! / (pj)!`, valid for every `p`.
    #[default]
    Corrected,
    /// `Π_{j=1}^{r} (p(n-1) + j)! / (pj)!`, which agrees with the corrected
    /// form only at `p = 1`.
    Printed,
}

/// A positive series `Σ_k term(k)` whose value times `1/e` is a Bell number.
struct BellSeries<F> {
    term: F,
}

impl<F: FnMut(u64) -> BigRational> BellSeries<F> {
    fn evaluate(&mut self, spec: &SeriesSpec) -> Result<ErrorBoundedReal> {
        let target = spec.target()?;
        // Truncate at a quarter of the target; the rest of the budget goes to
        // the 1/e enclosure and the final rounding.
        let sum = sum_positive_series(&mut self.term, &(&target / BigRational::from_integer(4.into())))?;
        finish(&sum, spec.working_precision, &target)
    }

    fn evaluate_with_cutoff(&mut self, cutoff: u64, bits: u32) -> Option<ErrorBoundedReal> {
        let sum = sum_with_cutoff(&mut self.term, cutoff)?;
        Some(scale_by_inv_e(&sum.partial, &sum.tail_bound, bits))
    }
}

fn finish(sum: &TruncatedSum, bits: u32, target: &BigRational) -> Result<ErrorBoundedReal> {
    let value = scale_by_inv_e(&sum.partial, &sum.tail_bound, bits);
    if value.abs_error() > target {
        return Err(Error::PrecisionExhausted { bits });
    }
    Ok(value)
}

fn inv_factorial(k: u64) -> BigRational {
    BigRational::new(BigInt::one(), factorial(k as u32))
}

// The k = 0 term vanishes for n >= 1, so the sum starts at k = 1.
fn classic_term(n: u32) -> impl FnMut(u64) -> BigRational {
    move |k| BigRational::new(num_traits::pow(BigInt::from(k + 1), n as usize), factorial(k as u32 + 1))
}

fn rr_term(r: u32, n: u32) -> impl FnMut(u64) -> BigRational {
    move |k| {
        let k = k as u32;
        let bracket = falling(k + r, r);
        BigRational::new(num_traits::pow(bracket, (n - 1) as usize), factorial(k))
    }
}

/// `(r-s)^{s(n-1)} Π_j Γ(n + x_j)/Γ(1 + x_j)` with `x_j = (k+j)/(r-s)`. Each
/// gamma ratio is the rising product `Π_{m=1}^{n-1} (x_j + m)`, and the power
/// of `r - s` clears every denominator, leaving `Π_j Π_m (k + j + m(r-s))`.
fn rs_numerator(r: u32, s: u32, n: u32, k: u64) -> BigInt {
    let d = (r - s) as u64;
    let mut acc = BigInt::one();
    for j in 1..=s as u64 {
        for m in 1..n as u64 {
            acc *= k + j + m * d;
        }
    }
    acc
}

fn rs_term(r: u32, s: u32, n: u32, form: GeneralForm) -> impl FnMut(u64) -> BigRational {
    move |k| {
        let numer = BigRational::from(rs_numerator(r, s, n, k));
        match form {
            GeneralForm::Corrected => numer * inv_factorial(k),
            GeneralForm::Printed => numer,
        }
    }
}

fn hypergeometric_prefactor(p: u32, r: u32, n: u32, prefactor: HypergeometricPrefactor) -> BigRational {
    let mut acc = BigRational::one();
    for j in 1..=r {
        let top = match prefactor {
            HypergeometricPrefactor::Corrected => p * (n - 1) + p * j,
            HypergeometricPrefactor::Printed => p * (n - 1) + j,
        };
        acc *= BigRational::new(factorial(top), factorial(p * j));
    }
    acc
}

/// Prefactor times the `m`-th term of `rFr(a; b; 1)` with
/// `a_i = pn + 1 + p(i-1)`, `b_i = 1 + p + p(i-1)`.
fn hypergeometric_term(p: u32, r: u32, n: u32, prefactor: HypergeometricPrefactor) -> impl FnMut(u64) -> BigRational {
    let pre = hypergeometric_prefactor(p, r, n, prefactor);
    let a: Vec<u64> = (0..r as u64).map(|i| (p * n) as u64 + 1 + p as u64 * i).collect();
    let b: Vec<u64> = (0..r as u64).map(|i| 1 + p as u64 + p as u64 * i).collect();
    move |m| {
        let mut numer = BigInt::one();
        let mut denom = factorial(m as u32);
        for (ai, bi) in a.iter().zip(&b) {
            for t in 0..m {
                numer *= ai + t;
                denom *= bi + t;
            }
        }
        &pre * BigRational::new(numer, denom)
    }
}

fn require_positive_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("series representations need n >= 1"));
    }
    Ok(())
}

/// `(1/e) Σ_k k^n/k!`, which equals `B(n)`.
pub fn dobinski_classic(n: u32, spec: &SeriesSpec) -> Result<ErrorBoundedReal> {
    require_positive_n(n)?;
    BellSeries { term: classic_term(n) }.evaluate(spec)
}

/// `(1/e) Σ_k (1/k!) [(k+r)!/k!]^{n-1}`, which equals `B_{r,r}(n)`.
pub fn dobinski_rr(r: u32, n: u32, spec: &SeriesSpec) -> Result<ErrorBoundedReal> {
    require_positive_n(n)?;
    if r == 0 {
        return Err(Error::Unsupported { r, s: r });
    }
    BellSeries { term: rr_term(r, n) }.evaluate(spec)
}

/// The general series for `B_{r,s}(n)`, `r > s >= 1`.
pub fn dobinski_rs(r: u32, s: u32, n: u32, spec: &SeriesSpec) -> Result<ErrorBoundedReal> {
    dobinski_rs_form(r, s, n, spec, GeneralForm::Corrected)
}

pub fn dobinski_rs_form(r: u32, s: u32, n: u32, spec: &SeriesSpec, form: GeneralForm) -> Result<ErrorBoundedReal> {
    require_positive_n(n)?;
    if s == 0 || r <= s {
        return Err(Error::Unsupported { r, s });
    }
    BellSeries { term: rs_term(r, s, n, form) }.evaluate(spec)
}

/// `B_{pr+p,pr}(n)` through its `rFr` representation at unit argument.
pub fn bell_hypergeometric(p: u32, r: u32, n: u32, spec: &SeriesSpec) -> Result<ErrorBoundedReal> {
    bell_hypergeometric_with(p, r, n, spec, HypergeometricPrefactor::Corrected)
}

pub fn bell_hypergeometric_with(
    p: u32,
    r: u32,
    n: u32,
    spec: &SeriesSpec,
    prefactor: HypergeometricPrefactor,
) -> Result<ErrorBoundedReal> {
    require_positive_n(n)?;
    if p == 0 || r == 0 {
        return Err(Error::InvalidArgument("hypergeometric family needs p >= 1 and r >= 1"));
    }
    BellSeries { term: hypergeometric_term(p, r, n, prefactor) }.evaluate(spec)
}

/// The series that represents `B_{r,s}(n)`, chosen by the shape of `(r, s)`.
pub fn dobinski(spec: MonomialSpec, series: &SeriesSpec) -> Result<ErrorBoundedReal> {
    let spec = MonomialSpec::new(spec.r, spec.s, spec.n)?;
    match (spec.r, spec.s) {
        (1, 1) => dobinski_classic(spec.n, series),
        (r, s) if r == s => dobinski_rr(r, spec.n, series),
        (r, s) => dobinski_rs(r, s, spec.n, series),
    }
}

/// Same as [`dobinski`] but truncated at exactly `cutoff` terms. `None` when
/// the term ratio at the cutoff is not yet below one.
pub fn dobinski_with_cutoff(spec: MonomialSpec, cutoff: u64, bits: u32) -> Result<Option<ErrorBoundedReal>> {
    let spec = MonomialSpec::new(spec.r, spec.s, spec.n)?;
    require_positive_n(spec.n)?;
    let n = spec.n;
    Ok(match (spec.r, spec.s) {
        (1, 1) => BellSeries { term: classic_term(n) }.evaluate_with_cutoff(cutoff, bits),
        (r, s) if r == s => BellSeries { term: rr_term(r, n) }.evaluate_with_cutoff(cutoff, bits),
        (r, s) => BellSeries { term: rs_term(r, s, n, GeneralForm::Corrected) }.evaluate_with_cutoff(cutoff, bits),
    })
}

/// Retries `eval` with the working precision doubled on
/// [`Error::PrecisionExhausted`], up to [`MAX_BITS`].
pub fn with_auto_precision<T>(spec: &SeriesSpec, mut eval: impl FnMut(&SeriesSpec) -> Result<T>) -> Result<T> {
    let mut current = *spec;
    loop {
        match eval(&current) {
            Err(Error::PrecisionExhausted { bits }) if bits < MAX_BITS => {
                current.working_precision = (bits * 2).min(MAX_BITS);
            }
            other => return other,
        }
    }
}

/// `|value - exact|` as `f64`, for reporting.
pub fn deviation(value: &ErrorBoundedReal, exact: &BigInt) -> f64 {
    let diff = value.value() - BigRational::from(exact.clone());
    if diff.is_zero() {
        0.0
    } else {
        num_traits::Signed::abs(&diff).to_f64().unwrap_or(f64::INFINITY)
    }
}
