//! Generalized Stirling numbers `S_{r,s}(n,k)` and Bell numbers `B_{r,s}(n)`.
//!
//! `S_{r,s}(n,k)` is the coefficient of `(a†)^{n(r-s)+k} a^k` in the normal
//! form of `[(a†)^r a^s]^n`; `B_{r,s}(n)` is the row sum. The normal-ordering
//! oracle defines both; the closed forms for `(r, r)` and `(2, 1)` are fast
//! paths that must agree with it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinat::{binomial, factorial, falling};
use crate::operator::{extract_stirling, monomial_power_normal_form, monomial_powers, MonomialSpec};
use crate::{Error, Result};

/// One row `k -> S_{r,s}(n,k)`, `k ∈ s..=ns`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    pub spec: MonomialSpec,
    pub values: BTreeMap<u32, BigInt>,
}

impl StirlingTable {
    /// Row read off the oracle's normal form.
    pub fn from_oracle(spec: MonomialSpec) -> Result<Self> {
        let spec = validate_row(spec)?;
        let nf = monomial_power_normal_form(spec)?;
        let values = extract_stirling(&nf, spec)?;
        Ok(StirlingTable { spec, values })
    }

    /// Row via [`stirling`], i.e. closed forms where they exist.
    pub fn compute(spec: MonomialSpec) -> Result<Self> {
        let spec = validate_row(spec)?;
        if has_closed_form(spec) {
            let values = spec.k_range().map(|k| stirling(spec, k).map(|v| (k, v))).collect::<Result<_>>()?;
            Ok(StirlingTable { spec, values })
        } else {
            Self::from_oracle(spec)
        }
    }

    pub fn row_sum(&self) -> BigInt {
        self.values.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellValue {
    pub spec: MonomialSpec,
    pub value: BigInt,
}

fn validate_row(spec: MonomialSpec) -> Result<MonomialSpec> {
    let spec = MonomialSpec::new(spec.r, spec.s, spec.n)?;
    if spec.n == 0 {
        return Err(Error::InvalidArgument("Stirling rows start at n = 1"));
    }
    Ok(spec)
}

fn has_closed_form(spec: MonomialSpec) -> bool {
    spec.r == spec.s || (spec.r, spec.s) == (2, 1)
}

/// Exact `S_{r,s}(n,k)`.
pub fn stirling(spec: MonomialSpec, k: u32) -> Result<BigInt> {
    let spec = validate_row(spec)?;
    if !spec.k_range().contains(&k) {
        return Err(Error::OutOfRange { k, lo: spec.s, hi: spec.n * spec.s });
    }
    if spec.r == spec.s {
        stirling_rr_closed(spec.r, spec.n, k)
    } else if (spec.r, spec.s) == (2, 1) {
        lah(spec.n, k)
    } else {
        let nf = monomial_power_normal_form(spec)?;
        Ok(extract_stirling(&nf, spec)?.remove(&k).unwrap_or_else(BigInt::zero))
    }
}

/// `S_{r,r}(n,k) = Σ_{p=0}^{k-r} (-1)^p [(k-p)!/(k-p-r)!]^n / ((k-p)! p!)`,
/// accumulated in exact rationals in order of increasing `p`.
pub fn stirling_rr_closed(r: u32, n: u32, k: u32) -> Result<BigInt> {
    if r == 0 || n == 0 {
        return Err(Error::InvalidArgument("stirling_rr_closed needs r >= 1 and n >= 1"));
    }
    if k < r || k > r * n {
        return Err(Error::OutOfRange { k, lo: r, hi: r * n });
    }
    let mut sum = BigRational::zero();
    for p in 0..=(k - r) {
        let m = k - p;
        let numer = num_traits::pow(falling(m, r), n as usize);
        let term = BigRational::new(numer, factorial(m) * factorial(p));
        if p % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if !sum.is_integer() || sum.is_negative() {
        return Err(Error::NonIntegerResult);
    }
    Ok(sum.to_integer())
}

/// Unsigned Lah number `n!/k! · C(n-1, k-1)`, equal to `S_{2,1}(n,k)`.
pub fn lah(n: u32, k: u32) -> Result<BigInt> {
    if k < 1 || k > n {
        return Err(Error::OutOfRange { k, lo: 1, hi: n });
    }
    Ok(factorial(n) / factorial(k) * binomial(n - 1, k - 1))
}

/// `B_{r,s}(n) = Σ_k S_{r,s}(n,k)`, with `B_{r,s}(0) = 1`.
pub fn bell(spec: MonomialSpec) -> Result<BellValue> {
    let spec = MonomialSpec::new(spec.r, spec.s, spec.n)?;
    let value = if spec.n == 0 { BigInt::one() } else { StirlingTable::compute(spec)?.row_sum() };
    Ok(BellValue { spec, value })
}

/// `B_{r,s}(0..=n_max)` from a single run of iterated multiplication.
pub fn bell_sequence(r: u32, s: u32, n_max: u32) -> Result<Vec<BigInt>> {
    Ok(monomial_powers(r, s)?.take(n_max as usize + 1).map(|nf| nf.unit_expectation()).collect())
}
