use std::collections::BTreeMap;

use bosonkit_core::operator::{extract_stirling, monomial_power_normal_form};
use bosonkit_core::stirling::{bell, bell_sequence, lah, stirling, stirling_rr_closed, StirlingTable};
use bosonkit_core::MonomialSpec;
use num_bigint::BigInt;

fn oracle_row(r: u32, s: u32, n: u32) -> BTreeMap<u32, BigInt> {
    let spec = MonomialSpec::new(r, s, n).unwrap();
    extract_stirling(&monomial_power_normal_form(spec).unwrap(), spec).unwrap()
}

/// Classical triangle S(n+1,k) = k S(n,k) + S(n,k-1), S(0,0) = 1.
fn classical_triangle(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::from(1)]];
    for n in 0..n_max {
        let prev = &rows[n];
        let row = (0..=n + 1)
            .map(|k| {
                let stay = prev.get(k).map(|v| v * k).unwrap_or_default();
                let grow = if k > 0 { prev.get(k - 1).cloned().unwrap_or_default() } else { BigInt::default() };
                stay + grow
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[test]
fn stirling_matches_oracle() {
    for r in 1..=3u32 {
        for s in 1..=r {
            for n in 1..=5u32 {
                let spec = MonomialSpec::new(r, s, n).unwrap();
                let oracle = oracle_row(r, s, n);
                for k in spec.k_range() {
                    assert_eq!(stirling(spec, k).unwrap(), oracle[&k], "S_{{{r},{s}}}({n},{k})");
                }
                assert_eq!(StirlingTable::compute(spec).unwrap().values, oracle);
                assert_eq!(bell(spec).unwrap().value, oracle.values().sum::<BigInt>());
            }
        }
    }
}

#[test]
fn classical_collapse() {
    let triangle = classical_triangle(8);
    for n in 1..=8u32 {
        let spec = MonomialSpec::new(1, 1, n).unwrap();
        for k in 1..=n {
            assert_eq!(stirling(spec, k).unwrap(), triangle[n as usize][k as usize]);
        }
    }
    let bells = bell_sequence(1, 1, 10).unwrap();
    let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
    assert_eq!(bells, expected.map(BigInt::from).to_vec());
}

#[test]
fn closed_forms_never_leave_the_integers() {
    for r in 1..=3u32 {
        for n in 1..=5u32 {
            let oracle = oracle_row(r, r, n);
            for k in r..=r * n {
                assert_eq!(stirling_rr_closed(r, n, k).unwrap(), oracle[&k]);
            }
        }
    }
    for n in 1..=6u32 {
        let oracle = oracle_row(2, 1, n);
        for k in 1..=n {
            assert_eq!(lah(n, k).unwrap(), oracle[&k]);
        }
    }
}

#[test]
fn bell_sequence_agrees_with_bell() {
    for (r, s) in [(2, 1), (3, 1), (3, 2), (2, 2), (3, 3)] {
        let seq = bell_sequence(r, s, 5).unwrap();
        for n in 0..=5u32 {
            assert_eq!(seq[n as usize], bell(MonomialSpec::new(r, s, n).unwrap()).unwrap().value);
        }
    }
}
