//! Small exact combinatorial helpers shared across the crate.

use num_bigint::BigInt;
use num_traits::One;

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Falling factorial `n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0u32);
    }
    (n - k + 1..=n).fold(BigInt::one(), |acc, m| acc * m)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(j, l) C(i, l) l!`: number of ways to contract `l` annihilators out of
/// `a^j` against `l` creators out of `(a†)^i`.
pub fn contraction_weight(j: u32, i: u32, l: u32) -> BigInt {
    falling(j, l) * binomial(i, l)
}
