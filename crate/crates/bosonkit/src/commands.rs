//! Subcommand implementations. Each returns an [`OutputRecord`]; failed
//! checks live inside the record, hard errors come back as [`CliError`].

use bosonkit_core::dobinski::{
    bell_hypergeometric, deviation, dobinski, dobinski_rs_form, with_auto_precision, GeneralForm, SeriesSpec,
};
use bosonkit_core::genfunc::{egf_classic, egf_r1_with, verify_normal_exponential_with, ExponentSign};
use bosonkit_core::measures;
use bosonkit_core::stirling::{bell_sequence, StirlingTable};
use bosonkit_core::{Error, ErrorBoundedReal, MonomialSpec};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::record::{format_bound, Cell, OutputRecord};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unsupported: {0}")]
    Unsupported(Error),
    #[error("computation failed: {0}")]
    Compute(Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 usage, 2 unsupported input, 4 computation or IO failure. Code 3
    /// (failed verification) is decided from the record, not from an error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Unsupported(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported { .. } | Error::UnsupportedFamily { .. } | Error::UnsupportedMoment => {
                CliError::Unsupported(e)
            }
            Error::InvalidArgument(msg) => CliError::Usage(msg.into()),
            other => CliError::Compute(other),
        }
    }
}

pub type CliResult<T> = core::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub bits: u32,
    pub tol: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: bosonkit_core::dobinski::DEFAULT_BITS, tol: 1e-9 }
    }
}

impl Precision {
    fn series_spec(&self) -> CliResult<SeriesSpec> {
        Ok(SeriesSpec::new(self.bits, self.tol)?)
    }
}

fn at_least_one(name: &str, v: u32) -> CliResult<()> {
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be at least 1")));
    }
    Ok(())
}

pub fn stirling(r: u32, s: u32, n: u32) -> CliResult<OutputRecord> {
    let spec = MonomialSpec::new(r, s, n)?;
    at_least_one("n", n)?;
    let table = StirlingTable::compute(spec)?;
    let mut rec = OutputRecord::new("stirling").param("r", r).param("s", s).param("n", n);
    for (k, v) in &table.values {
        rec.push_row([("k", Cell::count(*k)), ("S", Cell::integer(v))]);
    }
    Ok(rec)
}

pub fn bell(r: u32, s: u32, max: u32) -> CliResult<OutputRecord> {
    MonomialSpec::new(r, s, 0)?;
    let mut rec = OutputRecord::new("bell").param("r", r).param("s", s).param("max", max);
    for (n, b) in bell_sequence(r, s, max)?.iter().enumerate() {
        rec.push_row([("n", Cell::count(n as u32)), ("B", Cell::integer(b))]);
    }
    Ok(rec)
}

/// Certified value of the series representation of `B_{r,s}(n)`.
pub fn series(r: u32, s: u32, n: u32, precision: &Precision) -> CliResult<OutputRecord> {
    let spec = MonomialSpec::new(r, s, n)?;
    at_least_one("n", n)?;
    let series = precision.series_spec()?;
    let value = with_auto_precision(&series, |sp| dobinski(spec, sp))?;
    let mut rec = OutputRecord::new("series")
        .param("r", r)
        .param("s", s)
        .param("n", n)
        .param("bits", precision.bits)
        .param("tol", precision.tol);
    rec.push_row([("n", Cell::count(n)), ("series", Cell::real(&value))]);
    Ok(rec)
}

fn integer_check(value: &ErrorBoundedReal, expected: &BigInt, tol: f64) -> (bool, String) {
    let err = value.abs_error_f64();
    let passed = err <= tol && value.round_to_integer().as_ref() == Some(expected);
    let detail = format!(
        "expected {expected}, deviation {}, bound {}",
        format_bound(deviation(value, expected)),
        format_bound(err)
    );
    (passed, detail)
}

fn failure_detail(e: &Error) -> String {
    match e {
        Error::Divergent { terms } => format!("series diverges (terms still growing after {terms})"),
        other => other.to_string(),
    }
}

pub fn verify_dobinski(r: u32, s: u32, max: u32, precision: &Precision, printed_b5: bool) -> CliResult<OutputRecord> {
    MonomialSpec::new(r, s, 1)?;
    at_least_one("max", max)?;
    let series = precision.series_spec()?;
    let bells = bell_sequence(r, s, max)?;
    let form = if printed_b5 { GeneralForm::Printed } else { GeneralForm::Corrected };
    let mut rec = OutputRecord::new("verify dobinski")
        .param("r", r)
        .param("s", s)
        .param("max", max)
        .param("bits", precision.bits)
        .param("tol", precision.tol)
        .param("form", if printed_b5 && r > s { "printed" } else { "corrected" });

    // B_{r,s} with r - s = p and s = p q also has the rFr representation.
    let hyper = (r > s && s.is_multiple_of(r - s)).then(|| (r - s, s / (r - s)));

    for n in 1..=max {
        let expected = &bells[n as usize];
        let spec = MonomialSpec::new(r, s, n)?;
        let value =
            with_auto_precision(
                &series,
                |sp| {
                    if r > s {
                        dobinski_rs_form(r, s, n, sp, form)
                    } else {
                        dobinski(spec, sp)
                    }
                },
            );
        match value {
            Ok(v) => {
                let (passed, detail) = integer_check(&v, expected, precision.tol);
                rec.push_row([("n", Cell::count(n)), ("bell", Cell::integer(expected)), ("series", Cell::real(&v))]);
                rec.push_check(format!("dobinski n={n}"), passed, detail);
            }
            Err(e @ (Error::Divergent { .. } | Error::PrecisionExhausted { .. })) => {
                rec.push_row([
                    ("n", Cell::count(n)),
                    ("bell", Cell::integer(expected)),
                    ("series", Cell::text("no value")),
                ]);
                rec.push_check(format!("dobinski n={n}"), false, failure_detail(&e));
            }
            Err(e) => return Err(e.into()),
        }
        if let Some((p, q)) = hyper {
            match with_auto_precision(&series, |sp| bell_hypergeometric(p, q, n, sp)) {
                Ok(v) => {
                    let (passed, detail) = integer_check(&v, expected, precision.tol);
                    rec.push_check(format!("hypergeometric p={p} r={q} n={n}"), passed, detail);
                }
                Err(e @ (Error::Divergent { .. } | Error::PrecisionExhausted { .. })) => {
                    rec.push_check(format!("hypergeometric p={p} r={q} n={n}"), false, failure_detail(&e));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(rec)
}

fn sign_label(sign: ExponentSign) -> &'static str {
    match sign {
        ExponentSign::Corrected => "-1/(r-1)",
        ExponentSign::Printed => "+1/(r-1)",
    }
}

/// `n! [λ^n]` of the generating function against `B_{r,1}(n)`.
pub fn verify_egf(r: u32, order: u32, printed_sign: bool) -> CliResult<OutputRecord> {
    at_least_one("r", r)?;
    at_least_one("order", order)?;
    let sign = if printed_sign { ExponentSign::Printed } else { ExponentSign::Corrected };
    let series = if r == 1 { egf_classic(order as usize) } else { egf_r1_with(r, order as usize, sign)? };
    let bells = bell_sequence(r, 1, order)?;
    let mut rec = OutputRecord::new("verify egf").param("r", r).param("order", order);
    if r > 1 {
        rec = rec.param("exponent", sign_label(sign));
    }
    for (n, (scaled, expected)) in series.egf_sequence().iter().zip(&bells).enumerate() {
        let passed = *scaled == BigRational::from(expected.clone());
        rec.push_row([
            ("n", Cell::count(n as u32)),
            ("coefficient", Cell::rational(series.coeff(n))),
            ("n!*coefficient", Cell::rational(scaled)),
            ("bell", Cell::integer(expected)),
        ]);
        rec.push_check(format!("egf n={n}"), passed, format!("n!*coefficient = {scaled}, expected {expected}"));
    }
    Ok(rec)
}

/// Normal-ordered `exp(λ (a†)^r a)` against its closed form, order by order.
pub fn verify_norm(r: u32, order: u32, printed_sign: bool) -> CliResult<OutputRecord> {
    at_least_one("r", r)?;
    at_least_one("order", order)?;
    let sign = if printed_sign { ExponentSign::Printed } else { ExponentSign::Corrected };
    let report = verify_normal_exponential_with(r, order as usize, sign)?;
    let mut rec = OutputRecord::new("verify norm").param("r", r).param("order", order);
    if r > 1 {
        rec = rec.param("exponent", sign_label(sign));
    }
    for m in 0..=order as usize {
        let (lhs, rhs) = (report.lhs.coeff(m), report.rhs.coeff(m));
        let passed = lhs == rhs;
        rec.push_row([
            ("order", Cell::count(m as u32)),
            ("ordered", Cell::exact(lhs.to_string())),
            ("closed_form", Cell::exact(rhs.to_string())),
        ]);
        let detail = if passed { format!("{lhs}") } else { format!("{lhs} != {rhs}") };
        rec.push_check(format!("norm order={m}"), passed, detail);
    }
    Ok(rec)
}

pub fn verify_moments(r: u32, s: u32, max: u32, tol: f64) -> CliResult<OutputRecord> {
    at_least_one("max", max)?;
    let report = measures::verify_moments(r, s, max, tol)?;
    let mut rec = OutputRecord::new("verify moments").param("r", r).param("s", s).param("max", max).param("tol", tol);
    for m in &report.moments {
        rec.push_row([
            ("n", Cell::count(m.n)),
            ("bell", Cell::integer(&m.expected)),
            ("moment", Cell::real(&m.moment)),
        ]);
        let (_, detail) = integer_check(&m.moment, &m.expected, f64::INFINITY);
        rec.push_check(format!("moment n={}", m.n), m.passed, detail);
    }
    let mass = &report.mass;
    rec.push_check("total mass", mass.passed, format!("computed {}, expected {}", mass.computed, mass.expected));
    let pos = &report.positivity;
    rec.push_check("positivity", pos.passed, format!("{} samples, smallest {:.3e}", pos.samples, pos.min_value));
    Ok(rec)
}

/// Every suite over its standard grid.
pub fn verify_all(precision: &Precision) -> CliResult<OutputRecord> {
    let mut rec = OutputRecord::new("verify all").param("bits", precision.bits).param("tol", precision.tol);
    for (r, s, max) in [(1, 1, 10), (2, 2, 4), (3, 3, 4), (2, 1, 5), (3, 1, 5), (3, 2, 5)] {
        rec.absorb(&format!("dobinski r={r} s={s}"), verify_dobinski(r, s, max, precision, false)?);
    }
    for (r, order) in [(1, 8), (2, 6), (3, 6)] {
        rec.absorb(&format!("egf r={r}"), verify_egf(r, order, false)?);
    }
    for r in 1..=3 {
        rec.absorb(&format!("norm r={r}"), verify_norm(r, 5, false)?);
    }
    for (r, s, max) in [(1, 1, 5), (2, 2, 4), (2, 1, 5)] {
        rec.absorb(&format!("moments r={r} s={s}"), verify_moments(r, s, max, precision.tol)?);
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column(rec: &OutputRecord, name: &str) -> Vec<String> {
        rec.results
            .iter()
            .map(|row| match &row[name] {
                Cell::Exact { exact } => exact.clone(),
                other => panic!("{other:?}"),
            })
            .collect()
    }

    #[test]
    fn stirling_rows() {
        assert_eq!(column(&stirling(1, 1, 4).unwrap(), "S"), ["1", "7", "6", "1"]);
        assert_eq!(column(&stirling(2, 1, 3).unwrap(), "S"), ["6", "6", "1"]);
        assert_eq!(stirling(2, 3, 2).unwrap_err().exit_code(), 2);
        assert_eq!(stirling(2, 1, 0).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn bell_rows() {
        assert_eq!(column(&bell(1, 1, 5).unwrap(), "B"), ["1", "1", "2", "5", "15", "52"]);
        assert_eq!(column(&bell(2, 1, 4).unwrap(), "B"), ["1", "1", "3", "13", "73"]);
        assert_eq!(column(&bell(2, 2, 3).unwrap(), "B"), ["1", "1", "7", "87"]);
    }

    #[test]
    fn dobinski_suite() {
        let p = Precision::default();
        let ok = verify_dobinski(2, 1, 5, &p, false).unwrap();
        assert!(ok.passed());
        // (2,1) also has the hypergeometric route
        assert_eq!(ok.checks.len(), 10);
        let printed = verify_dobinski(2, 1, 3, &p, true).unwrap();
        assert!(!printed.passed());
        assert!(printed.checks[0].detail.contains("diverges"));
    }

    #[test]
    fn sign_suites() {
        assert!(verify_egf(3, 6, false).unwrap().passed());
        assert!(verify_norm(2, 5, false).unwrap().passed());
        let printed = verify_norm(2, 3, true).unwrap();
        let first_fail = printed.checks.iter().position(|c| c.status == crate::record::Status::Fail);
        assert_eq!(first_fail, Some(1));
    }

    #[test]
    fn unsupported_moment_family() {
        assert_eq!(verify_moments(3, 1, 3, 1e-9).unwrap_err().exit_code(), 2);
    }
}
