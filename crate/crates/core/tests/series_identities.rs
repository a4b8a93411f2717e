use bosonkit_core::dobinski::{
    bell_hypergeometric, dobinski, dobinski_classic, dobinski_rr, dobinski_rs, dobinski_rs_form, dobinski_with_cutoff,
    GeneralForm, SeriesSpec,
};
use bosonkit_core::genfunc::{
    double_dot_exponential, egf_classic, egf_r1, egf_r1_with, verify_normal_exponential, ExponentSign, OperatorSeries,
};
use bosonkit_core::measures::{weight_2r_r, Measure};
use bosonkit_core::stirling::{bell, bell_sequence};
use bosonkit_core::{Error, MonomialSpec};
use num_bigint::BigInt;
use num_rational::BigRational;

fn bell_of(r: u32, s: u32, n: u32) -> BigInt {
    bell(MonomialSpec::new(r, s, n).unwrap()).unwrap().value
}

fn tight() -> SeriesSpec {
    SeriesSpec::new(256, 1e-9).unwrap()
}

#[test]
fn dobinski_grid_collapses_to_integers() {
    let spec = tight();
    for n in 1..=10 {
        let v = dobinski_classic(n, &spec).unwrap();
        assert!(v.abs_error_f64() < 1e-6);
        assert_eq!(v.round_to_integer(), Some(bell_of(1, 1, n)));
    }
    for r in 1..=3 {
        for n in 1..=4 {
            let v = dobinski_rr(r, n, &spec).unwrap();
            assert_eq!(v.round_to_integer(), Some(bell_of(r, r, n)), "rr r={r} n={n}");
        }
    }
    for (r, s) in [(2, 1), (3, 1), (3, 2)] {
        for n in 1..=5 {
            let v = dobinski_rs(r, s, n, &spec).unwrap();
            assert!(v.abs_error_f64() < 1e-6);
            assert_eq!(v.round_to_integer(), Some(bell_of(r, s, n)), "rs ({r},{s}) n={n}");
        }
    }
}

#[test]
fn literal_general_form_is_divergent() {
    let r = dobinski_rs_form(2, 1, 3, &tight(), GeneralForm::Printed);
    assert!(matches!(r, Err(Error::Divergent { .. })));
}

#[test]
fn truncations_are_monotone_and_enclose_the_limit() {
    for (r, s, n) in [(1, 1, 5), (2, 2, 3), (3, 1, 4)] {
        let spec = MonomialSpec::new(r, s, n).unwrap();
        let exact = BigRational::from(bell_of(r, s, n));
        let mut last: Option<BigRational> = None;
        for cutoff in [40u64, 60, 80, 120, 160] {
            let Some(v) = dobinski_with_cutoff(spec, cutoff, 256).unwrap() else { continue };
            assert!(v.contains(&exact), "({r},{s},{n}) cutoff {cutoff}");
            if let Some(prev) = &last {
                assert!(v.value() >= prev);
            }
            last = Some(v.value().clone());
        }
        assert!(last.is_some());
    }
}

#[test]
fn series_routes_agree() {
    let spec = tight();
    for n in 1..=4 {
        let a = bell_hypergeometric(1, 1, n, &spec).unwrap();
        let b = dobinski(MonomialSpec::new(2, 1, n).unwrap(), &spec).unwrap();
        assert!(a.agrees_with(&b));
        let c = bell_hypergeometric(1, 2, n, &spec).unwrap();
        assert_eq!(c.round_to_integer(), Some(bell_of(3, 2, n)));
        let d = bell_hypergeometric(2, 1, n, &spec).unwrap();
        assert_eq!(d.round_to_integer(), Some(bell_of(4, 2, n)));
    }
}

fn egf_matches(series: &bosonkit_core::genfunc::FormalSeries, bells: &[BigInt]) -> bool {
    series.egf_sequence().iter().zip(bells).all(|(a, b)| *a == BigRational::from(b.clone()))
}

#[test]
fn egf_coefficients_are_bell_numbers() {
    assert!(egf_matches(&egf_classic(8), &bell_sequence(1, 1, 8).unwrap()));
    for r in [2, 3] {
        let bells = bell_sequence(r, 1, 6).unwrap();
        assert!(egf_matches(&egf_r1(r, 6).unwrap(), &bells));
        let printed = egf_r1_with(r, 2, ExponentSign::Printed).unwrap();
        assert!(!egf_matches(&printed, &bells[..3]));
    }
}

#[test]
fn normal_ordered_exponential_closed_forms() {
    for r in 1..=3 {
        let report = verify_normal_exponential(r, 5).unwrap();
        assert!(report.passed(), "r={r}: {:?}", report.first_mismatch);
    }
}

#[test]
fn closed_form_at_unit_coherent_state_is_the_egf() {
    let rhs = OperatorSeries::from_double_dot(&double_dot_exponential(1, 6, ExponentSign::Corrected).unwrap());
    assert_eq!(rhs.unit_expectation(), egf_classic(6));
    for r in [2, 3] {
        let rhs = OperatorSeries::from_double_dot(&double_dot_exponential(r, 6, ExponentSign::Corrected).unwrap());
        assert_eq!(rhs.unit_expectation(), egf_r1(r, 6).unwrap());
    }
}

#[test]
fn quadrature_agrees_with_series() {
    let density = weight_2r_r(1).unwrap();
    let spec = tight();
    for n in 1..=4 {
        let q = density.moment(n, 1e-9).unwrap();
        let s = dobinski_rs(2, 1, n, &spec).unwrap();
        assert!(q.agrees_with(&s), "n={n}: {q} vs {s}");
    }
}

#[test]
fn measure_selection() {
    assert!(matches!(Measure::for_pair(1, 1), Ok(Measure::Discrete(_))));
    assert!(matches!(Measure::for_pair(3, 3), Ok(Measure::Discrete(_))));
    assert!(matches!(Measure::for_pair(4, 2), Ok(Measure::Continuous(_))));
    assert!(matches!(Measure::for_pair(3, 1), Err(Error::UnsupportedFamily { .. })));
}
