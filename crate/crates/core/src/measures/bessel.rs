//! Modified Bessel function of the first kind, integer order, from its power
//! series `I_ν(y) = Σ_m (y/2)^{2m+ν} / (m! (m+ν)!)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::factorial;
use crate::real::{ceil_dyadic, round_dyadic, sum_positive_series, ErrorBoundedReal};
use crate::{Error, Result};

/// `I_ν(y)` to within `target_error`, summed in exact rationals.
pub fn bessel_i(nu: u32, y: f64, target_error: f64) -> Result<ErrorBoundedReal> {
    if !target_error.is_finite() || target_error <= 0.0 {
        return Err(Error::InvalidArgument("target_error must be positive and finite"));
    }
    if !y.is_finite() || y < 0.0 {
        return Err(Error::InvalidArgument("bessel_i needs a finite y >= 0"));
    }
    if y == 0.0 {
        let v = if nu == 0 { BigRational::one() } else { BigRational::zero() };
        return Ok(ErrorBoundedReal::exact(v));
    }
    let half_y = BigRational::from_float(y).expect("finite") / BigRational::from_integer(2.into());
    let target = BigRational::from_float(target_error).expect("finite");
    let bits = 64 + libm::ceil(-libm::log2(target_error)).max(0.0) as u32;

    let sq = &half_y * &half_y;
    let lead = num_traits::pow(half_y, nu as usize);
    let sum = sum_positive_series(
        |m| {
            let m = m as u32;
            &lead * num_traits::pow(sq.clone(), m as usize) / BigRational::from(factorial(m) * factorial(m + nu))
        },
        &(&target / BigRational::from_integer(4.into())),
    )?;
    let value = round_dyadic(&sum.partial, bits);
    let rounding = BigRational::new(BigInt::one(), BigInt::one() << (bits as usize + 1));
    let abs_error = ceil_dyadic(&(sum.tail_bound + rounding), bits);
    if abs_error > target {
        return Err(Error::PrecisionExhausted { bits });
    }
    Ok(ErrorBoundedReal::new(value, abs_error))
}

/// `Σ_m u^{2m} / (m! (m+ν)!)`, which is `I_ν(2u) / u^ν`. Returns the value and
/// a bound on its relative error (truncation plus rounding).
pub fn reduced_series_f64(nu: u32, u: f64) -> (f64, f64) {
    let u2 = u * u;
    let mut term = 1.0 / factorial_f64(nu);
    let mut sum = 0.0;
    let mut m = 0u32;
    loop {
        sum += term;
        let ratio = u2 / ((m + 1) as f64 * (m + 1 + nu) as f64);
        let next = term * ratio;
        if ratio < 0.5 && next <= f64::EPSILON * sum {
            let tail = next / (1.0 - ratio);
            // positive terms, each carrying O(m) roundings
            let rel = tail / sum + (3.0 * (m + 1) as f64 + 8.0) * f64::EPSILON;
            return (sum, rel);
        }
        term = next;
        m += 1;
    }
}

/// `I_ν(y)` in double precision, with an absolute error bound.
pub fn bessel_i_f64(nu: u32, y: f64) -> (f64, f64) {
    let u = 0.5 * y;
    let (s, rel) = reduced_series_f64(nu, u);
    let v = libm::pow(u, nu as f64) * s;
    (v, v * (rel + 4.0 * f64::EPSILON))
}

fn factorial_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}
