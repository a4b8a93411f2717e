//! Truncated formal power series in `λ` and the generating-function identities
//! for Bell numbers.
//!
//! All arithmetic is exact. Coefficients are either rationals or commuting
//! polynomials in the symbols `a†`, `a` (the double-dot ordering, where
//! symbols are reshuffled without commutator corrections).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinat::factorial;
use crate::operator::{monomial_powers, NormalForm};
use crate::stirling::bell_sequence;
use crate::{Error, Result};

/// Commutative ring with rational scalars, as needed by [`FormalSeries`].
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero_element() -> Self;
    fn one_element() -> Self;
    fn is_zero_element(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn scale(&self, q: &BigRational) -> Self;
}

impl Ring for BigRational {
    fn zero_element() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one_element() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero_element(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &BigRational) -> Self {
        self * q
    }
}

/// Polynomial in commuting symbols `a†`, `a`, stored as a normal form whose
/// product ignores contractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutingPoly(pub NormalForm<BigRational>);

impl CommutingPoly {
    pub fn monomial(i: u32, j: u32, coeff: BigRational) -> Self {
        CommutingPoly(NormalForm::term(i, j, coeff))
    }
}

impl Ring for CommutingPoly {
    fn zero_element() -> Self {
        CommutingPoly(NormalForm::zero())
    }
    fn one_element() -> Self {
        CommutingPoly(NormalForm::identity())
    }
    fn is_zero_element(&self) -> bool {
        self.0.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        CommutingPoly(self.0.add(&other.0))
    }
    fn mul_ref(&self, other: &Self) -> Self {
        CommutingPoly(self.0.mul_commuting(&other.0))
    }
    fn scale(&self, q: &BigRational) -> Self {
        CommutingPoly(self.0.scale(q))
    }
}

/// `Σ_{m=0}^{N} c_m λ^m`, exact through order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSeries<C: Ring = BigRational> {
    coeffs: Vec<C>,
}

impl<C: Ring> FormalSeries<C> {
    /// Pads with zeros or truncates so that the series has order `order`.
    pub fn new(mut coeffs: Vec<C>, order: usize) -> Self {
        coeffs.resize(order + 1, C::zero_element());
        FormalSeries { coeffs }
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &C {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let coeffs = (0..=order).map(|m| self.coeffs[m].add_ref(&other.coeffs[m])).collect();
        Self::new(coeffs, order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.common_order(other);
        let coeffs = (0..=order)
            .map(|m| {
                (0..=m).fold(C::zero_element(), |acc, k| acc.add_ref(&self.coeffs[k].mul_ref(&other.coeffs[m - k])))
            })
            .collect();
        Self::new(coeffs, order)
    }

    /// Multiplies every coefficient by the ring element `c`.
    pub fn mul_coeffs(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect(), self.order())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.scale(q)).collect(), self.order())
    }

    /// The series with its constant term replaced by zero.
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = C::zero_element();
        out
    }

    /// `exp(self)`; the constant term must vanish.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero_element() {
            return Err(Error::InvalidArgument("exp needs a series without constant term"));
        }
        // g' = f' g  =>  m g_m = Σ_{k=1}^{m} k f_k g_{m-k}
        let order = self.order();
        let mut g = vec![C::one_element()];
        for m in 1..=order {
            let mut acc = C::zero_element();
            for k in 1..=m {
                let weight = BigRational::from_integer(BigInt::from(k));
                acc = acc.add_ref(&self.coeffs[k].mul_ref(&g[m - k]).scale(&weight));
            }
            g.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(m))));
        }
        Ok(Self::new(g, order))
    }

    /// `outer(self)`, i.e. `Σ_m outer_m · self^m`; the constant term of `self` must vanish.
    pub fn compose_into(&self, outer: &FormalSeries<C>) -> Result<Self> {
        if !self.coeffs[0].is_zero_element() {
            return Err(Error::InvalidArgument("composition needs an inner series without constant term"));
        }
        let order = self.common_order(outer);
        let inner = Self::new(self.coeffs.clone(), order);
        let mut acc = Self::constant(outer.coeffs[order].clone(), order);
        for m in (0..order).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].add_ref(&outer.coeffs[m]);
        }
        Ok(acc)
    }

    /// `(1 + c λ)^α = Σ_m C(α, m) c^m λ^m` for rational `α`.
    pub fn binomial(alpha: &BigRational, c: &C, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut binom = <BigRational as One>::one();
        let mut power = C::one_element();
        for m in 0..=order {
            coeffs.push(power.scale(&binom));
            let m_q = BigRational::from_integer(BigInt::from(m));
            binom = binom * (alpha - &m_q) / (m_q + <BigRational as One>::one());
            power = power.mul_ref(c);
        }
        Self::new(coeffs, order)
    }
}

impl FormalSeries<BigRational> {
    /// `e^λ - 1`.
    pub fn exp_minus_one(order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|m| {
                if m == 0 {
                    <BigRational as Zero>::zero()
                } else {
                    BigRational::new(BigInt::one(), factorial(m as u32))
                }
            })
            .collect();
        Self::new(coeffs, order)
    }

    /// `m! · c_m`: the sequence this series is the exponential generating function of.
    pub fn egf_sequence(&self) -> Vec<BigRational> {
        self.coeffs.iter().enumerate().map(|(m, c)| c * BigRational::from(factorial(m as u32))).collect()
    }
}

/// `exp(e^λ - 1)`, the exponential generating function of `B(n)`.
pub fn egf_classic(order: usize) -> FormalSeries {
    FormalSeries::exp_minus_one(order).exp().expect("e^λ - 1 has no constant term")
}

/// Sign of the exponent `±1/(r-1)` in the `(a†)^r a` exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentSign {
    /// `-1/(r-1)`, which reproduces `B_{r,1}(n)`.
    #[default]
    Corrected,
    /// `+1/(r-1)`, which does not.
    Printed,
}

impl ExponentSign {
    fn exponent(self, r: u32) -> BigRational {
        let mag = BigRational::new(BigInt::one(), BigInt::from(r - 1));
        match self {
            ExponentSign::Corrected => -mag,
            ExponentSign::Printed => mag,
        }
    }
}

/// `exp{(1 - (r-1)λ)^{-1/(r-1)} - 1}`, the exponential generating function of
/// `B_{r,1}(n)`.
pub fn egf_r1(r: u32, order: usize) -> Result<FormalSeries> {
    egf_r1_with(r, order, ExponentSign::Corrected)
}

pub fn egf_r1_with(r: u32, order: usize, sign: ExponentSign) -> Result<FormalSeries> {
    if r < 2 {
        return Err(Error::InvalidArgument("egf_r1 needs r >= 2"));
    }
    let c = BigRational::from_integer(-BigInt::from(r - 1));
    FormalSeries::binomial(&sign.exponent(r), &c, order).without_constant().exp()
}

/// Power series in `λ` whose coefficients are normally ordered operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSeries {
    coeffs: Vec<NormalForm<BigRational>>,
}

impl OperatorSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &NormalForm<BigRational> {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[NormalForm<BigRational>] {
        &self.coeffs
    }

    /// `exp(λ (a†)^r a^s) = Σ_m λ^m [(a†)^r a^s]^m / m!`, each power normal ordered.
    pub fn exponential_of_monomial(r: u32, s: u32, order: usize) -> Result<Self> {
        let coeffs = monomial_powers(r, s)?
            .take(order + 1)
            .enumerate()
            .map(|(m, nf)| {
                let inv = BigRational::new(BigInt::one(), factorial(m as u32));
                nf.to_rational().scale(&inv)
            })
            .collect();
        Ok(OperatorSeries { coeffs })
    }

    /// Reads each commuting monomial as the normally ordered `(a†)^i a^j`.
    pub fn from_double_dot(series: &FormalSeries<CommutingPoly>) -> Self {
        OperatorSeries { coeffs: series.coeffs().iter().map(|p| p.0.clone()).collect() }
    }

    /// Coherent-state expectation at `z = 1`, order by order.
    pub fn unit_expectation(&self) -> FormalSeries {
        let coeffs = self.coeffs.iter().map(|c| c.unit_expectation()).collect();
        FormalSeries::new(coeffs, self.order())
    }
}

/// `:exp{[(1 - (r-1) λ (a†)^{r-1})^{∓1/(r-1)} - 1] a† a}:` for `r >= 2`, and
/// `:exp{a† a (e^λ - 1)}:` for `r = 1`, expanded in commuting symbols.
pub fn double_dot_exponential(r: u32, order: usize, sign: ExponentSign) -> Result<FormalSeries<CommutingPoly>> {
    let number = CommutingPoly::monomial(1, 1, <BigRational as One>::one());
    let inner = match r {
        0 => return Err(Error::InvalidArgument("r must be at least 1")),
        1 => {
            let coeffs = FormalSeries::exp_minus_one(order)
                .into_coeffs()
                .into_iter()
                .map(|c| CommutingPoly::monomial(0, 0, c))
                .collect();
            FormalSeries::new(coeffs, order)
        }
        _ => {
            let c = CommutingPoly::monomial(r - 1, 0, BigRational::from_integer(-BigInt::from(r - 1)));
            FormalSeries::binomial(&sign.exponent(r), &c, order).without_constant()
        }
    };
    inner.mul_coeffs(&number).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub order: usize,
    pub lhs: NormalForm<BigRational>,
    pub rhs: NormalForm<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalExponentialReport {
    pub r: u32,
    pub order: usize,
    pub sign: ExponentSign,
    pub lhs: OperatorSeries,
    pub rhs: OperatorSeries,
    pub first_mismatch: Option<Mismatch>,
}

impl NormalExponentialReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares `exp(λ (a†)^r a)`, normal ordered power by power, with the
/// double-dot closed form, coefficient by coefficient.
pub fn verify_normal_exponential(r: u32, order: usize) -> Result<NormalExponentialReport> {
    verify_normal_exponential_with(r, order, ExponentSign::Corrected)
}

pub fn verify_normal_exponential_with(r: u32, order: usize, sign: ExponentSign) -> Result<NormalExponentialReport> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1"));
    }
    let lhs = OperatorSeries::exponential_of_monomial(r, 1, order)?;
    let rhs = OperatorSeries::from_double_dot(&double_dot_exponential(r, order, sign)?);
    let first_mismatch = (0..=order).find(|&m| lhs.coeff(m) != rhs.coeff(m)).map(|m| Mismatch {
        order: m,
        lhs: lhs.coeff(m).clone(),
        rhs: rhs.coeff(m).clone(),
    });
    Ok(NormalExponentialReport { r, order, sign, lhs, rhs, first_mismatch })
}

/// Result of the finite-radius heuristic for `Σ B_{r,s}(n) λ^n / (n!)^{t+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationOrder {
    pub t: u32,
    /// Estimated `α` in `B(n+1)/B(n) ~ n^α` at the last available `n`.
    pub growth_exponent: f64,
    /// The previous estimate, for judging stability.
    pub previous_exponent: f64,
}

impl NormalizationOrder {
    /// Always true: `t` comes from finite ratio data, not a proof.
    pub fn is_heuristic(&self) -> bool {
        true
    }
}

const EXPONENT_STABILITY: f64 = 0.1;

/// Smallest `t >= 0` for which `[B(n+1)/B(n)] / n^{t+1}` looks bounded.
///
/// With `ρ_n = B(n+1)/B(n)`, the local exponent
/// `α_n = ln(ρ_n/ρ_{n-1}) / ln(n/(n-1))` approaches the growth order of `ρ_n`
/// from below (the ratios carry logarithmic corrections), so
/// `t = max(0, ⌈α⌉ - 1)`. Estimates that still move by more than 0.1 between
/// the last two `n` are reported as inconclusive.
pub fn select_normalization_order(r: u32, s: u32, max_n: u32) -> Result<NormalizationOrder> {
    if max_n < 6 {
        return Err(Error::InvalidArgument("max_n must be at least 6"));
    }
    let bells = bell_sequence(r, s, max_n)?;
    let ratio = |n: usize| BigRational::new(bells[n + 1].clone(), bells[n].clone()).to_f64().unwrap_or(f64::INFINITY);
    let exponent = |n: usize| libm::log(ratio(n) / ratio(n - 1)) / libm::log(n as f64 / (n - 1) as f64);
    let last = max_n as usize - 1;
    let growth_exponent = exponent(last);
    let previous_exponent = exponent(last - 1);
    if !growth_exponent.is_finite() || libm::fabs(growth_exponent - previous_exponent) > EXPONENT_STABILITY {
        return Err(Error::Inconclusive { max_n });
    }
    let t = (libm::ceil(growth_exponent) - 1.0).max(0.0) as u32;
    Ok(NormalizationOrder { t, growth_exponent, previous_exponent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn classic_coefficients() {
        let s = egf_classic(5);
        assert_eq!(*s.coeff(0), q(1, 1));
        assert_eq!(*s.coeff(3), q(5, 6));
        assert_eq!(*s.coeff(5), q(52, 120));
    }

    #[test]
    fn r1_coefficients() {
        let s2 = egf_r1(2, 3).unwrap();
        assert_eq!(*s2.coeff(2), q(3, 2));
        assert_eq!(*s2.coeff(3), q(13, 6));
        let s3 = egf_r1(3, 2).unwrap();
        assert_eq!(*s3.coeff(2), q(2, 1));
    }

    #[test]
    fn printed_sign_gives_exp_minus_lambda() {
        let s = egf_r1_with(2, 4, ExponentSign::Printed).unwrap();
        assert_eq!(*s.coeff(1), q(-1, 1));
        assert_eq!(*s.coeff(2), q(1, 2));
        assert_eq!(*s.coeff(3), q(-1, 6));
    }

    #[test]
    fn binomial_and_composition() {
        // (1 - λ)^{-1} = Σ λ^m
        let geo = FormalSeries::binomial(&q(-1, 1), &q(-1, 1), 6);
        assert!(geo.coeffs().iter().all(|c| *c == q(1, 1)));
        // exp(e^λ - 1) via composition agrees with exp()
        let outer = FormalSeries::exp_minus_one(6).add(&FormalSeries::constant(q(1, 1), 6));
        let composed = FormalSeries::exp_minus_one(6).compose_into(&outer).unwrap();
        assert_eq!(composed, egf_classic(6));
    }

    #[test]
    fn exp_requires_zero_constant() {
        assert!(FormalSeries::constant(q(1, 1), 3).exp().is_err());
    }

    #[test]
    fn normal_exponential_examples() {
        let rep = verify_normal_exponential(1, 3).unwrap();
        assert!(rep.passed());
        let rep = verify_normal_exponential(2, 2).unwrap();
        assert!(rep.passed());
        let expected = NormalForm::from_terms([((4, 2), q(1, 2)), ((3, 1), q(1, 1))]);
        assert_eq!(rep.lhs.coeff(2), &expected);
        assert_eq!(rep.rhs.coeff(2), &expected);
        assert!(verify_normal_exponential(2, 5).unwrap().passed());
    }

    #[test]
    fn printed_sign_fails_at_first_order() {
        let rep = verify_normal_exponential_with(2, 3, ExponentSign::Printed).unwrap();
        assert_eq!(rep.first_mismatch.as_ref().map(|m| m.order), Some(1));
    }

    #[test]
    fn normalization_order_examples() {
        assert_eq!(select_normalization_order(1, 1, 10).unwrap().t, 0);
        assert_eq!(select_normalization_order(2, 1, 10).unwrap().t, 0);
        assert_eq!(select_normalization_order(2, 2, 10).unwrap().t, 1);
        assert!(select_normalization_order(2, 2, 5).is_err());
    }
}
