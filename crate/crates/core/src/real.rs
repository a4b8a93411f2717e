//! Reals with a certified absolute error, and the positive-series summation
//! they are usually produced by.
//!
//! Values are dyadic rationals rounded to a working precision; error bounds
//! are rounded upward. Nothing here uses floating point except the
//! conversions to and from `f64` at the edges.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinat::factorial;
use crate::{Error, Result};

/// `value ± abs_error`, with `|true - value| <= abs_error`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorBoundedReal {
    value: BigRational,
    abs_error: BigRational,
}

impl ErrorBoundedReal {
    pub fn new(value: BigRational, abs_error: BigRational) -> Self {
        assert!(!abs_error.is_negative(), "error bound must be non-negative");
        ErrorBoundedReal { value, abs_error }
    }

    pub fn exact(value: BigRational) -> Self {
        Self::new(value, BigRational::zero())
    }

    /// Wraps a floating-point estimate. Returns `None` for non-finite input.
    pub fn from_f64(value: f64, abs_error: f64) -> Option<Self> {
        let v = BigRational::from_float(value)?;
        let e = BigRational::from_float(abs_error.abs())?;
        Some(Self::new(v, e))
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn abs_error(&self) -> &BigRational {
        &self.abs_error
    }

    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs_error_f64(&self) -> f64 {
        self.abs_error.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn lower(&self) -> BigRational {
        &self.value - &self.abs_error
    }

    pub fn upper(&self) -> BigRational {
        &self.value + &self.abs_error
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (&self.value - x).abs() <= self.abs_error
    }

    pub fn contains_integer(&self, x: &BigInt) -> bool {
        self.contains(&BigRational::from(x.clone()))
    }

    /// Nearest integer, only when the error bound is below one half.
    pub fn round_to_integer(&self) -> Option<BigInt> {
        if self.abs_error >= half() {
            return None;
        }
        Some(self.value.round().to_integer())
    }

    /// Whether the two enclosures overlap: `|v1 - v2| <= e1 + e2`.
    pub fn agrees_with(&self, other: &ErrorBoundedReal) -> bool {
        (&self.value - &other.value).abs() <= &self.abs_error + &other.abs_error
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(&self.value * factor, &self.abs_error * factor.abs())
    }

    /// Fixed-point decimal rendering of the value with `digits` fractional digits.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        decimal_string(&self.value, digits)
    }
}

impl fmt::Display for ErrorBoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.to_decimal_string(12), self.abs_error_f64())
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub fn decimal_string(x: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = (x * BigRational::from(scale.clone())).round().to_integer();
    let neg = scaled.sign() == Sign::Minus;
    let (int, frac) = scaled.abs().div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{}{}", sign, int)
    } else {
        format!("{}{}.{:0>width$}", sign, int, frac, width = digits as usize)
    }
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

/// Nearest multiple of `2^-bits`.
pub fn round_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    BigRational::new((x * BigRational::from(scale.clone())).round().to_integer(), scale)
}

pub fn floor_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    BigRational::new((x * BigRational::from(scale.clone())).floor().to_integer(), scale)
}

pub fn ceil_dyadic(x: &BigRational, bits: u32) -> BigRational {
    let scale = pow2(bits);
    BigRational::new((x * BigRational::from(scale.clone())).ceil().to_integer(), scale)
}

/// Dyadic enclosure `lo <= 1/e <= hi` with `hi - lo <= 2^-bits`.
pub fn inv_e_bounds(bits: u32) -> (BigRational, BigRational) {
    // Partial sums of Σ (-1)^k / k! alternate around 1/e.
    let eps = BigRational::new(BigInt::one(), pow2(bits + 2));
    let mut sum = BigRational::zero();
    let mut k = 0u32;
    loop {
        let term = BigRational::new(BigInt::one(), factorial(k));
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        let next = BigRational::new(BigInt::one(), factorial(k + 1));
        if next < eps {
            let other = if k.is_multiple_of(2) { &sum - &next } else { &sum + &next };
            let (lo, hi) = if sum < other { (sum, other) } else { (other, sum) };
            return (floor_dyadic(&lo, bits + 2), ceil_dyadic(&hi, bits + 2));
        }
        k += 1;
    }
}

/// `(1/e) · (partial + τ)` for an unknown `τ ∈ [0, tail]`, rounded to `bits`.
/// Both inputs must be non-negative.
pub fn scale_by_inv_e(partial: &BigRational, tail: &BigRational, bits: u32) -> ErrorBoundedReal {
    let (lo, hi) = inv_e_bounds(bits + 4);
    let lower = lo * partial;
    let upper = hi * (partial + tail);
    let mid = (&lower + &upper) / BigRational::from_integer(2.into());
    let value = round_dyadic(&mid, bits);
    let spread = core::cmp::max(&upper - &value, &value - &lower);
    ErrorBoundedReal::new(value, ceil_dyadic(&spread, bits))
}

/// Partial sum of a positive series plus a bound on everything omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSum {
    pub partial: BigRational,
    pub tail_bound: BigRational,
    /// Number of terms included in `partial` (indices `0..terms`).
    pub terms: u64,
}

/// Hard cap on the number of terms the summation loop will inspect.
pub const MAX_TERMS: u64 = 20_000;
const DIVERGENCE_START: u64 = 512;
const DIVERGENCE_WINDOW: u64 = 32;

/// Sums a series of strictly positive terms whose consecutive ratios
/// `t_{k+1}/t_k` are non-increasing in `k`.
///
/// Stops at the first `K` with `t_K < target/2` and `ρ = t_{K+1}/t_K < 1/2`;
/// the tail `Σ_{k>K} t_k` is then at most `t_{K+1}/(1 - ρ)`. A run of
/// non-decreasing terms past index 512 is reported as divergence.
pub fn sum_positive_series<F>(mut term: F, target: &BigRational) -> Result<TruncatedSum>
where
    F: FnMut(u64) -> BigRational,
{
    let half_target = target / BigRational::from_integer(2.into());
    let ratio_cap = half();
    let mut partial = BigRational::zero();
    let mut current = term(0);
    let mut rising_run = 0u64;
    let mut k = 0u64;
    loop {
        partial += &current;
        let next = term(k + 1);
        let ratio = &next / &current;
        if current < half_target && ratio < ratio_cap {
            let tail_bound = &next / (BigRational::one() - ratio);
            return Ok(TruncatedSum { partial, tail_bound, terms: k + 1 });
        }
        if k >= DIVERGENCE_START && next >= current {
            rising_run += 1;
            if rising_run >= DIVERGENCE_WINDOW {
                return Err(Error::Divergent { terms: k + 2 });
            }
        } else {
            rising_run = 0;
        }
        k += 1;
        if k >= MAX_TERMS {
            return Err(Error::Divergent { terms: k });
        }
        current = next;
    }
}

/// Sums terms `0..cutoff` of a series with the same ratio property as
/// [`sum_positive_series`]. Returns `None` if the ratio at the cutoff is not
/// yet below one, so no geometric tail bound is available.
pub fn sum_with_cutoff<F>(mut term: F, cutoff: u64) -> Option<TruncatedSum>
where
    F: FnMut(u64) -> BigRational,
{
    if cutoff == 0 {
        return None;
    }
    let mut partial = BigRational::zero();
    let mut last = BigRational::zero();
    for k in 0..cutoff {
        last = term(k);
        partial += &last;
    }
    let next = term(cutoff);
    let ratio = &next / &last;
    if ratio.cmp(&BigRational::one()) != Ordering::Less {
        return None;
    }
    let tail_bound = &next / (BigRational::one() - ratio);
    Some(TruncatedSum { partial, tail_bound, terms: cutoff })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inv_e_enclosure() {
        let (lo, hi) = inv_e_bounds(64);
        let e_inv = (-1.0f64).exp();
        assert!(lo.to_f64().unwrap() <= e_inv + 1e-16);
        assert!(hi.to_f64().unwrap() >= e_inv - 1e-16);
        assert!(&hi - &lo <= q(1, 1) / BigRational::from(pow2(64)));
    }

    #[test]
    fn rounding_rules() {
        let r = ErrorBoundedReal::new(q(29, 10), q(1, 5));
        assert_eq!(r.round_to_integer(), Some(BigInt::from(3)));
        let r = ErrorBoundedReal::new(q(29, 10), q(1, 2));
        assert_eq!(r.round_to_integer(), None);
        assert!(r.contains_integer(&BigInt::from(3)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_string(&q(-1, 3), 4), "-0.3333");
        assert_eq!(decimal_string(&q(7, 2), 0), "4");
        assert_eq!(decimal_string(&q(1, 20), 3), "0.050");
    }

    #[test]
    fn geometric_tail_is_certified() {
        // Σ 1/k! = e
        let s = sum_positive_series(|k| BigRational::new(1.into(), factorial(k as u32)), &q(1, 1_000_000)).unwrap();
        let e = core::f64::consts::E;
        let lo = s.partial.to_f64().unwrap();
        let hi = (&s.partial + &s.tail_bound).to_f64().unwrap();
        assert!(lo <= e && e <= hi + 1e-15);
        assert!(s.tail_bound < q(1, 1_000_000));
    }

    #[test]
    fn constant_terms_diverge() {
        assert!(matches!(sum_positive_series(|_| q(1, 1), &q(1, 1000)), Err(Error::Divergent { .. })));
    }
}
