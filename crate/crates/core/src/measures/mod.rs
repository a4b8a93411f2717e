//! Positive measures on `[0, ∞)` whose power moments are Bell numbers.
//!
//! Three families are supported:
//!
//! * the Dirac comb `W(x) = (1/e) Σ_{k>=0} δ(x - k)/k!` for `B(n)` (the atom
//!   at `x = 0` carries the mass that makes the total 1, and does not touch
//!   any moment with `n >= 1`);
//! * the rarefied comb for `B_{r,r}(n)`: atoms at `x_k = (k+r)!/k!` with
//!   weight `1/(e · k! · x_k)`;
//! * the continuous density
//!   `W_{2r,r}(x) = (1/(e r)) x^{(2-3r)/(2r)} e^{-x^{1/r}} I_r(2 x^{1/(2r)})`
//!   for `B_{2r,r}(n)`.

pub mod bessel;
pub mod quadrature;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::combinat::{factorial, falling};
use crate::dobinski::{with_auto_precision, SeriesSpec, DEFAULT_BITS};
use crate::real::{inv_e_bounds, scale_by_inv_e, sum_positive_series, ErrorBoundedReal};
use crate::stirling::bell_sequence;
use crate::{Error, Result};

pub use bessel::{bessel_i, bessel_i_f64};

const INV_E: f64 = 0.367_879_441_171_442_321_595_523_770_161_460_867;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscreteFamily {
    DiracComb,
    Rarefied { r: u32 },
}

/// Weighted atoms; weights are stored divided by `1/e`, which stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscreteMeasure {
    family: DiscreteFamily,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub location: BigInt,
    /// The atom's weight is `weight_times_e / e`.
    pub weight_times_e: BigRational,
}

impl Atom {
    pub fn weight_f64(&self) -> f64 {
        self.weight_times_e.to_f64().unwrap_or(0.0) * INV_E
    }
}

pub fn dirac_comb() -> DiscreteMeasure {
    DiscreteMeasure { family: DiscreteFamily::DiracComb }
}

pub fn rarefied_comb(r: u32) -> Result<DiscreteMeasure> {
    if r == 0 {
        return Err(Error::InvalidArgument("rarefied comb needs r >= 1"));
    }
    Ok(DiscreteMeasure { family: DiscreteFamily::Rarefied { r } })
}

impl DiscreteMeasure {
    pub fn family(&self) -> DiscreteFamily {
        self.family
    }

    /// The `k`-th atom, `k = 0, 1, ...`, in increasing location.
    pub fn atom(&self, k: u64) -> Atom {
        let k = k as u32;
        match self.family {
            DiscreteFamily::DiracComb => {
                Atom { location: BigInt::from(k), weight_times_e: BigRational::new(BigInt::one(), factorial(k)) }
            }
            DiscreteFamily::Rarefied { r } => {
                let x = falling(k + r, r);
                Atom { weight_times_e: BigRational::new(BigInt::one(), factorial(k) * &x), location: x }
            }
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        (0u64..).map(move |k| self.atom(k))
    }

    /// Certified bound on the weight carried by atoms `cutoff, cutoff+1, ...`.
    pub fn tail_weight_bound(&self, cutoff: u64) -> BigRational {
        // Weights times e are 1/k! or 1/(k+r)!, whose ratios fall below 1/2
        // from k = 1 on, so the tail is at most twice its first term.
        let first = self.atom(cutoff.max(1)).weight_times_e;
        let (_, hi) = inv_e_bounds(64);
        let head = if cutoff == 0 { self.atom(0).weight_times_e } else { BigRational::zero() };
        hi * (head + first * BigRational::from_integer(2.into()))
    }

    /// Total mass `Σ_k w_k`.
    pub fn total_mass(&self, target: f64) -> Result<ErrorBoundedReal> {
        self.moment_unchecked(0, target)
    }

    /// `∫ x^n dW`. The `n = 0` moment is only defined when the mass is 1.
    pub fn moment(&self, n: u32, target: f64) -> Result<ErrorBoundedReal> {
        if n == 0 && self.family != DiscreteFamily::DiracComb {
            return Err(Error::UnsupportedMoment);
        }
        self.moment_unchecked(n, target)
    }

    fn moment_unchecked(&self, n: u32, target: f64) -> Result<ErrorBoundedReal> {
        let spec = SeriesSpec::new(DEFAULT_BITS, target)?;
        let family = self.family;
        with_auto_precision(&spec, |spec| {
            let target = BigRational::from_float(spec.target_abs_error).expect("validated");
            let quarter = &target / BigRational::from_integer(4.into());
            let sum = match family {
                // Skip the atom at 0 when it contributes nothing.
                DiscreteFamily::DiracComb if n > 0 => sum_positive_series(
                    |k| {
                        let x = BigInt::from(k + 1);
                        BigRational::new(num_traits::pow(x, n as usize), factorial(k as u32 + 1))
                    },
                    &quarter,
                ),
                DiscreteFamily::DiracComb => {
                    sum_positive_series(|k| BigRational::new(BigInt::one(), factorial(k as u32)), &quarter)
                }
                // x_k^n · 1/(k! x_k)
                DiscreteFamily::Rarefied { r } => sum_positive_series(
                    |k| {
                        let k = k as u32;
                        let x = falling(k + r, r);
                        if n == 0 {
                            BigRational::new(BigInt::one(), factorial(k) * x)
                        } else {
                            BigRational::new(num_traits::pow(x, (n - 1) as usize), factorial(k))
                        }
                    },
                    &quarter,
                ),
            }?;
            let value = scale_by_inv_e(&sum.partial, &sum.tail_bound, spec.working_precision);
            if value.abs_error() > &target {
                return Err(Error::PrecisionExhausted { bits: spec.working_precision });
            }
            Ok(value)
        })
    }
}

/// `W_{2r,r}` on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContinuousDensity {
    r: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    pub abs_error: f64,
}

pub fn weight_2r_r(r: u32) -> Result<ContinuousDensity> {
    if r == 0 {
        return Err(Error::InvalidArgument("weight_2r_r needs r >= 1"));
    }
    Ok(ContinuousDensity { r })
}

const MAX_PANELS: usize = 4000;

impl ContinuousDensity {
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Density at `x > 0`. With `u = x^{1/(2r)}` and `I_r(2u) = u^r S_r(u)`,
    /// `W(x) = (1/(e r)) u^{2-2r} e^{-u^2} S_r(u)`.
    pub fn evaluate(&self, x: f64) -> Result<DensityValue> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::Domain);
        }
        let r = self.r as f64;
        let u = libm::pow(x, 1.0 / (2.0 * r));
        let (series, rel) = bessel::reduced_series_f64(self.r, u);
        let value = INV_E / r * libm::pow(u, 2.0 - 2.0 * r) * libm::exp(-u * u) * series;
        Ok(DensityValue { value, abs_error: value * (rel + 16.0 * f64::EPSILON) })
    }

    /// `∫_0^∞ x^n W(x) dx` for `n >= 1`.
    pub fn moment(&self, n: u32, target: f64) -> Result<ErrorBoundedReal> {
        if n == 0 {
            return Err(Error::UnsupportedMoment);
        }
        self.integrate_moment(n, target)
    }

    /// `∫_0^∞ W(x) dx`, which falls short of 1.
    pub fn total_mass(&self, target: f64) -> Result<ErrorBoundedReal> {
        self.integrate_moment(0, target)
    }

    /// After `x = u^{2r}` the integrand is `(2/e) u^{2rn+1} e^{-u^2} S_r(u)`,
    /// smooth on `[0, ∞)`. The part beyond `U` is bounded with
    /// `S_r(u) <= u^{-r} e^{2u}`, i.e. integrand `<= 2 u^a e^{-(u-1)^2}` with
    /// `a = 2rn + 1 - r`, and the log-concave tail estimate
    /// `∫_U^∞ e^{h} <= e^{h(U)} / (-h'(U))`.
    fn integrate_moment(&self, n: u32, target: f64) -> Result<ErrorBoundedReal> {
        if !target.is_finite() || target <= 0.0 {
            return Err(Error::InvalidArgument("target must be positive and finite"));
        }
        let r = self.r;
        let power = (2 * r * n + 1) as i32;
        let a = (2 * r * n + 1).saturating_sub(r) as f64;

        let tail_at = |upper: f64| {
            let slope = 2.0 * (upper - 1.0) - a / upper;
            if slope <= 0.0 {
                return f64::INFINITY;
            }
            2.0 * libm::exp(a * libm::log(upper) - (upper - 1.0) * (upper - 1.0)) / slope
        };
        let mut upper = 2.0;
        while tail_at(upper) > target / 8.0 {
            upper += 0.5;
            if upper > 1e4 {
                return Err(Error::PrecisionExhausted { bits: f64::MANTISSA_DIGITS });
            }
        }
        let tail = tail_at(upper);

        let mut worst_rel: f64 = 0.0;
        let integrand = |u: f64| {
            let (series, rel) = bessel::reduced_series_f64(r, u);
            worst_rel = worst_rel.max(rel + 8.0 * f64::EPSILON);
            2.0 * INV_E * libm::pow(u, power as f64) * libm::exp(-u * u) * series
        };
        let breaks: Vec<f64> = (1..libm::ceil(upper) as u32).map(|b| b as f64).collect();
        let quad = quadrature::integrate(integrand, 0.0, upper, &breaks, target / 4.0, MAX_PANELS)?;
        let abs_error = quad.abs_error + tail + worst_rel * quad.value.abs();
        if abs_error > target {
            return Err(Error::PrecisionExhausted { bits: f64::MANTISSA_DIGITS });
        }
        ErrorBoundedReal::from_f64(quad.value, abs_error)
            .ok_or(Error::PrecisionExhausted { bits: f64::MANTISSA_DIGITS })
    }
}

/// `1 - (1/e) Σ_{j<r} 1/j!`, the mass of both the rarefied comb and `W_{2r,r}`.
pub fn deficient_mass(r: u32) -> ErrorBoundedReal {
    let head: BigRational = (0..r).map(|j| BigRational::new(BigInt::one(), factorial(j))).sum();
    let scaled = scale_by_inv_e(&head, &BigRational::zero(), DEFAULT_BITS);
    ErrorBoundedReal::new(BigRational::one() - scaled.value(), scaled.abs_error().clone())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Discrete(DiscreteMeasure),
    Continuous(ContinuousDensity),
}

impl Measure {
    /// The measure whose moments are `B_{r,s}(n)`, where one is available.
    pub fn for_pair(r: u32, s: u32) -> Result<Self> {
        match (r, s) {
            (1, 1) => Ok(Measure::Discrete(dirac_comb())),
            (r, s) if r == s && r > 1 => Ok(Measure::Discrete(rarefied_comb(r)?)),
            (r, s) if s >= 1 && r == 2 * s => Ok(Measure::Continuous(weight_2r_r(s)?)),
            _ => Err(Error::UnsupportedFamily { r, s }),
        }
    }

    pub fn moment(&self, n: u32, target: f64) -> Result<ErrorBoundedReal> {
        match self {
            Measure::Discrete(m) => m.moment(n, target),
            Measure::Continuous(m) => m.moment(n, target),
        }
    }

    pub fn total_mass(&self, target: f64) -> Result<ErrorBoundedReal> {
        match self {
            Measure::Discrete(m) => m.total_mass(target),
            Measure::Continuous(m) => m.total_mass(target),
        }
    }

    /// Exact mass: 1 for the comb (atom at 0 included), otherwise
    /// `1 - (1/e) Σ_{j<r} 1/j!`.
    pub fn expected_mass(&self) -> ErrorBoundedReal {
        match self {
            Measure::Discrete(m) => match m.family {
                DiscreteFamily::DiracComb => ErrorBoundedReal::exact(BigRational::one()),
                DiscreteFamily::Rarefied { r } => deficient_mass(r),
            },
            Measure::Continuous(m) => deficient_mass(m.r),
        }
    }
}

/// `∫ x^n dW` for any supported measure.
pub fn moment(measure: &Measure, n: u32, target: f64) -> Result<ErrorBoundedReal> {
    measure.moment(n, target)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentCheck {
    pub n: u32,
    pub expected: BigInt,
    pub moment: ErrorBoundedReal,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassCheck {
    pub computed: ErrorBoundedReal,
    pub expected: ErrorBoundedReal,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityCheck {
    pub samples: usize,
    pub min_value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub r: u32,
    pub s: u32,
    pub tol: f64,
    pub measure: Measure,
    pub moments: Vec<MomentCheck>,
    pub mass: MassCheck,
    pub positivity: PositivityCheck,
}

impl MomentReport {
    pub fn passed(&self) -> bool {
        self.moments.iter().all(|m| m.passed) && self.mass.passed && self.positivity.passed
    }
}

pub const POSITIVITY_SAMPLES: usize = 1000;
const DISCRETE_SAMPLES: u64 = 200;

/// Atom weights (discrete) or density values on a log grid over
/// `[1e-6, 1e3]` (continuous); all must be non-negative.
pub fn positivity_check(measure: &Measure) -> Result<PositivityCheck> {
    match measure {
        Measure::Discrete(m) => {
            let all_positive = m.atoms().take(DISCRETE_SAMPLES as usize).all(|a| a.weight_times_e.is_positive());
            let min_value = m.atom(DISCRETE_SAMPLES - 1).weight_f64();
            Ok(PositivityCheck { samples: DISCRETE_SAMPLES as usize, min_value, passed: all_positive })
        }
        Measure::Continuous(m) => {
            let (lo, hi) = (-6.0f64, 3.0f64);
            let mut min_value = f64::INFINITY;
            for i in 0..POSITIVITY_SAMPLES {
                let t = lo + (hi - lo) * i as f64 / (POSITIVITY_SAMPLES - 1) as f64;
                let v = m.evaluate(libm::pow(10.0, t))?.value;
                min_value = min_value.min(v);
            }
            Ok(PositivityCheck { samples: POSITIVITY_SAMPLES, min_value, passed: min_value >= 0.0 })
        }
    }
}

/// Compares the moments `1..=n_max` of the measure for `(r, s)` against the
/// oracle Bell numbers. A moment passes when its error bound is within
/// `tol · B` and `|moment - B| <= max(tol · B, abs_error)`.
pub fn verify_moments(r: u32, s: u32, n_max: u32, tol: f64) -> Result<MomentReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive and finite"));
    }
    let measure = Measure::for_pair(r, s)?;
    let bells = bell_sequence(r, s, n_max)?;
    let tol_q = BigRational::from_float(tol).expect("finite");

    let mut moments = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let expected = bells[n as usize].clone();
        let expected_q = BigRational::from(expected.clone());
        let allowance = &tol_q * &expected_q;
        let target = allowance.to_f64().unwrap_or(f64::MAX) / 4.0;
        let moment = measure.moment(n, target)?;
        let deviation = (moment.value() - &expected_q).abs();
        let passed = moment.abs_error() <= &allowance
            && deviation <= core::cmp::max(allowance.clone(), moment.abs_error().clone());
        moments.push(MomentCheck { n, expected, moment, passed });
    }

    let computed = measure.total_mass(tol / 4.0)?;
    let expected = measure.expected_mass();
    let passed = computed.abs_error() <= &tol_q && (computed.value() - expected.value()).abs() <= tol_q;
    let mass = MassCheck { computed, expected, passed };

    let positivity = positivity_check(&measure)?;
    Ok(MomentReport { r, s, tol, measure, moments, mass, positivity })
}
