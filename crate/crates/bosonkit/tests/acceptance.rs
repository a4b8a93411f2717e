//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines always reach the terminal.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bosonkit::OutputRecord;
use bosonkit_core::dobinski::{
    bell_hypergeometric, dobinski_classic, dobinski_rr, dobinski_rs, dobinski_rs_form, GeneralForm, SeriesSpec,
};
use bosonkit_core::genfunc::{egf_classic, egf_r1, egf_r1_with, verify_normal_exponential, ExponentSign, FormalSeries};
use bosonkit_core::measures::verify_moments;
use bosonkit_core::operator::{extract_stirling, normal_order_word_with, RewriteStrategy};
use bosonkit_core::stirling::{bell, lah, stirling, stirling_rr_closed, StirlingTable};
use bosonkit_core::{BosonWord, Error, Letter, MonomialSpec, NormalForm};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

const TIME_LIMIT: Duration = Duration::from_secs(10);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn spec(r: u32, s: u32, n: u32) -> MonomialSpec {
    MonomialSpec::new(r, s, n).expect("valid exponents")
}

fn bell_of(r: u32, s: u32, n: u32) -> BigInt {
    bell(spec(r, s, n)).expect("oracle").value
}

fn letter_form(l: Letter) -> NormalForm {
    match l {
        Letter::Create => NormalForm::monomial(1, 0),
        Letter::Annihilate => NormalForm::monomial(0, 1),
    }
}

fn oracle_self_consistency() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for case in 0..200 {
        let len = rng.random_range(0..=12);
        let word = BosonWord::new(
            (0..len).map(|_| if rng.random_bool(0.5) { Letter::Create } else { Letter::Annihilate }).collect(),
        );
        let rewritten = normal_order_word_with(&word, RewriteStrategy::Leftmost);
        let multiplied = word.letters().iter().fold(NormalForm::identity(), |acc, l| acc.multiply(&letter_form(*l)));
        ensure(rewritten == multiplied, || format!("case {case}: word {word}: {rewritten} vs {multiplied}"))?;
        let other = normal_order_word_with(&word, RewriteStrategy::Rightmost);
        ensure(rewritten == other, || format!("case {case}: strategies disagree on {word}"))?;
    }
    Ok(())
}

fn classical_collapse() -> Outcome {
    let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    for (n, want) in expected.iter().enumerate() {
        let n = n as u32;
        let got = if n == 0 {
            BigInt::from(1)
        } else {
            StirlingTable::from_oracle(spec(1, 1, n)).map_err(|e| e.to_string())?.row_sum()
        };
        ensure(got == BigInt::from(*want), || format!("B({n}) = {got}, expected {want}"))?;
    }
    for n in 1..8u32 {
        for k in 1..=n + 1 {
            let s = |n: u32, k: u32| {
                if k == 0 || k > n {
                    Ok(BigInt::from(0))
                } else {
                    stirling(spec(1, 1, n), k)
                }
            };
            let lhs = s(n + 1, k).map_err(|e| e.to_string())?;
            let rhs = BigInt::from(k) * s(n, k).map_err(|e| e.to_string())? + s(n, k - 1).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("recurrence fails at n={n} k={k}"))?;
        }
    }
    Ok(())
}

fn closed_forms() -> Outcome {
    for r in 1..=3 {
        for n in 1..=5 {
            let sp = spec(r, r, n);
            let row = extract_stirling(&bosonkit_core::operator::monomial_power_normal_form(sp).unwrap(), sp)
                .map_err(|e| e.to_string())?;
            for (k, v) in &row {
                let c = stirling_rr_closed(r, n, *k).map_err(|e| e.to_string())?;
                ensure(&c == v, || format!("S_{{{r},{r}}}({n},{k}): closed {c}, oracle {v}"))?;
            }
        }
    }
    for n in 1..=6 {
        let sp = spec(2, 1, n);
        let row = extract_stirling(&bosonkit_core::operator::monomial_power_normal_form(sp).unwrap(), sp)
            .map_err(|e| e.to_string())?;
        for (k, v) in &row {
            let c = lah(n, *k).map_err(|e| e.to_string())?;
            ensure(&c == v, || format!("L({n},{k}): closed {c}, oracle {v}"))?;
        }
    }
    Ok(())
}

fn collapses(v: &bosonkit_core::ErrorBoundedReal, want: &BigInt, what: &str) -> Outcome {
    ensure(v.abs_error_f64() < 1e-6 && v.round_to_integer().as_ref() == Some(want), || {
        format!("{what}: {v}, expected {want}")
    })
}

fn dobinski_collapse() -> Outcome {
    let series = SeriesSpec::default();
    for n in 1..=10 {
        let v = dobinski_classic(n, &series).map_err(|e| e.to_string())?;
        collapses(&v, &bell_of(1, 1, n), &format!("n={n}"))?;
    }
    Ok(())
}

fn generalized_dobinski() -> Outcome {
    let series = SeriesSpec::default();
    for r in 1..=3 {
        for n in 1..=4 {
            let v = dobinski_rr(r, n, &series).map_err(|e| e.to_string())?;
            collapses(&v, &bell_of(r, r, n), &format!("rr r={r} n={n}"))?;
        }
    }
    for (r, s) in [(2, 1), (3, 1), (3, 2)] {
        for n in 1..=5 {
            let v = dobinski_rs(r, s, n, &series).map_err(|e| e.to_string())?;
            collapses(&v, &bell_of(r, s, n), &format!("rs ({r},{s}) n={n}"))?;
        }
        let printed = dobinski_rs_form(r, s, 3, &series, GeneralForm::Printed);
        ensure(matches!(printed, Err(Error::Divergent { .. })), || {
            format!("literal form for ({r},{s}) not flagged divergent: {printed:?}")
        })?;
    }
    Ok(())
}

fn hypergeometric_family() -> Outcome {
    let series = SeriesSpec::default();
    for n in 1..=4 {
        let v = bell_hypergeometric(1, 1, n, &series).map_err(|e| e.to_string())?;
        let want = bell_of(2, 1, n);
        ensure(v.contains_integer(&want), || format!("n={n}: {v} does not enclose {want}"))?;
    }
    Ok(())
}

fn matches_bells(series: &FormalSeries, r: u32, s: u32, order: u32) -> Option<usize> {
    series
        .egf_sequence()
        .iter()
        .take(order as usize + 1)
        .enumerate()
        .position(|(n, c)| *c != BigRational::from(bell_of(r, s, n as u32)))
}

fn egf_identities() -> Outcome {
    ensure(matches_bells(&egf_classic(8), 1, 1, 8).is_none(), || "classic EGF".into())?;
    for r in [2, 3] {
        let series = egf_r1(r, 6).map_err(|e| e.to_string())?;
        ensure(matches_bells(&series, r, 1, 6).is_none(), || format!("EGF r={r}"))?;
        let printed = egf_r1_with(r, 2, ExponentSign::Printed).map_err(|e| e.to_string())?;
        let first = matches_bells(&printed, r, 1, 2);
        ensure(matches!(first, Some(n) if n <= 2), || format!("+1/(r-1) exponent for r={r} did not fail by order 2"))?;
    }
    Ok(())
}

fn normal_exponential() -> Outcome {
    for r in 1..=3 {
        let report = verify_normal_exponential(r, 5).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("r={r}: first mismatch {:?}", report.first_mismatch.map(|m| m.order)))?;
    }
    Ok(())
}

fn moments() -> Outcome {
    for (r, s, n_max) in [(1, 1, 5), (2, 2, 4), (2, 1, 5)] {
        let report = verify_moments(r, s, n_max, 1e-9).map_err(|e| e.to_string())?;
        for m in &report.moments {
            ensure(m.passed, || format!("({r},{s}) n={}: {} vs {}", m.n, m.moment, m.expected))?;
        }
        ensure(report.positivity.passed, || format!("({r},{s}) positivity"))?;
        ensure(report.mass.passed, || format!("({r},{s}) mass {}", report.mass.computed))?;
        if (r, s) == (2, 1) {
            let target = 1.0 - (-1.0f64).exp();
            let got = report.mass.computed.value_f64();
            ensure((got - target).abs() <= 1e-9 && report.mass.computed.abs_error_f64() <= 1e-9, || {
                format!("W_{{2,1}} mass {got}, expected {target}")
            })?;
        }
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_bosonkit")).args(args).output().map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli_contract() -> Outcome {
    let cases: [(&[&str], i32); 3] = [
        (&["verify", "dobinski", "--r", "2", "--s", "1", "--max", "5"], 0),
        (&["verify", "norm", "--r", "2", "--order", "5"], 0),
        (&["verify", "norm", "--r", "2", "--order", "3", "--printed-sign"], 3),
    ];
    for (args, want) in cases {
        let mut with_json = vec!["--format", "json"];
        with_json.extend_from_slice(args);
        let (code, stdout) = run_cli(&with_json)?;
        ensure(code == want, || format!("`{}` exited {code}, expected {want}", args.join(" ")))?;
        let record = OutputRecord::from_json(&stdout).map_err(|e| format!("unparsable JSON: {e}"))?;
        ensure(record.to_json() == stdout, || "typed JSON round trip changed the text".into())?;
        let value: serde_json::Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
        let reemitted = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n";
        ensure(reemitted == stdout, || "untyped JSON round trip changed the text".into())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle self-consistency", oracle_self_consistency),
        ("classical collapse", classical_collapse),
        ("closed-form equivalence", closed_forms),
        ("Dobinski collapse", dobinski_collapse),
        ("generalized Dobinski", generalized_dobinski),
        ("hypergeometric family", hypergeometric_family),
        ("EGF identities", egf_identities),
        ("normal-ordered exponential", normal_exponential),
        ("moments", moments),
        ("CLI contract", cli_contract),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into())).and_then(|()| {
            let t = start.elapsed();
            ensure(t <= TIME_LIMIT, || format!("took {:.1} s", t.as_secs_f64()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  {:>2}. {name} ({secs:.2} s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL  {:>2}. {name} ({secs:.2} s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
