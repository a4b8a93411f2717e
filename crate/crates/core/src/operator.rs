//! Single-mode boson operators and their normal forms.
//!
//! A [`NormalForm`] is a finite linear combination of normally ordered
//! monomials `(a†)^i a^j`, stored as a map from the exponent pair `(i, j)` to a
//! non-zero coefficient. Two independent engines produce normal forms:
//!
//! * [`normal_order_word`] rewrites a word letter by letter with
//!   `a a† -> a† a + 1` until no annihilator precedes a creator;
//! * [`NormalForm::multiply`] multiplies two normal forms with the contraction
//!   rule `a^j (a†)^i = Σ_l C(j,l) C(i,l) l! (a†)^{i-l} a^{j-l}`.
//!
//! The first is the oracle for the second.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinat::contraction_weight;
use crate::{Error, Result};

/// Ring of coefficients a [`NormalForm`] can carry.
pub trait Coefficient: Clone + PartialEq + Zero + One + Add<Output = Self> + Mul<Output = Self> + From<BigInt> {}

impl<T> Coefficient for T where T: Clone + PartialEq + Zero + One + Add<Output = T> + Mul<Output = T> + From<BigInt> {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `a†`
    Create,
    /// `a`
    Annihilate,
}

/// A product of boson letters, read left to right. The empty word is the
/// identity operator.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BosonWord(pub Vec<Letter>);

impl BosonWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        BosonWord(letters)
    }

    pub fn identity() -> Self {
        BosonWord(Vec::new())
    }

    /// The word `[(a†)^r a^s]^n`.
    pub fn monomial_power(spec: MonomialSpec) -> Self {
        let mut letters = Vec::with_capacity(((spec.r + spec.s) * spec.n) as usize);
        for _ in 0..spec.n {
            letters.extend(core::iter::repeat_n(Letter::Create, spec.r as usize));
            letters.extend(core::iter::repeat_n(Letter::Annihilate, spec.s as usize));
        }
        BosonWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &BosonWord) -> BosonWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        BosonWord(letters)
    }

    fn is_normal(&self) -> bool {
        self.0.windows(2).all(|w| !(w[0] == Letter::Annihilate && w[1] == Letter::Create))
    }

    fn degrees(&self) -> (u32, u32) {
        let create = self.0.iter().filter(|l| **l == Letter::Create).count() as u32;
        (create, self.0.len() as u32 - create)
    }
}

impl fmt::Display for BosonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, letter) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            f.write_str(match letter {
                Letter::Create => "a†",
                Letter::Annihilate => "a",
            })?;
        }
        Ok(())
    }
}

/// The monomial `(a†)^r a^s` raised to the power `n`, with `r >= s >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialSpec {
    pub r: u32,
    pub s: u32,
    pub n: u32,
}

impl MonomialSpec {
    pub fn new(r: u32, s: u32, n: u32) -> Result<Self> {
        if s == 0 || r < s {
            return Err(Error::Unsupported { r, s });
        }
        Ok(MonomialSpec { r, s, n })
    }

    /// `n (r - s)`: the surplus of creators over annihilators in every term.
    pub fn excess(&self) -> u32 {
        self.n * (self.r - self.s)
    }

    /// Admissible Stirling indices `s..=ns` (empty for `n = 0`).
    pub fn k_range(&self) -> core::ops::RangeInclusive<u32> {
        self.s..=self.n * self.s
    }

    pub fn with_n(&self, n: u32) -> Self {
        MonomialSpec { n, ..*self }
    }
}

/// Linear combination of normally ordered monomials `(a†)^i a^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm<T = BigInt> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Coefficient> Default for NormalForm<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> NormalForm<T> {
    pub fn zero() -> Self {
        NormalForm { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::monomial(0, 0)
    }

    /// `(a†)^i a^j` with unit coefficient.
    pub fn monomial(i: u32, j: u32) -> Self {
        Self::term(i, j, T::one())
    }

    pub fn term(i: u32, j: u32, coeff: T) -> Self {
        let mut nf = Self::zero();
        nf.add_term(i, j, coeff);
        nf
    }

    /// Collects `(i, j, coeff)` triples, summing repeated keys and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), T)>>(terms: I) -> Self {
        let mut nf = Self::zero();
        for ((i, j), c) in terms {
            nf.add_term(i, j, c);
        }
        nf
    }

    pub fn add_term(&mut self, i: u32, j: u32, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        let key = (i, j);
        match self.terms.remove(&key) {
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&T> {
        self.terms.get(&(i, j))
    }

    /// Terms in increasing `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((i, j), c) in other.terms.iter() {
            out.add_term(*i, *j, c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c.clone() * factor.clone())))
    }

    pub fn map_coeffs<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> NormalForm<U> {
        NormalForm::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    /// Operator product `self · other`, normal ordered by contraction.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in self.terms.iter() {
            for (&(i2, j2), c2) in other.terms.iter() {
                let c = c1.clone() * c2.clone();
                for l in 0..=j1.min(i2) {
                    let w = T::from(contraction_weight(j1, i2, l));
                    out.add_term(i1 + i2 - l, j1 + j2 - l, c.clone() * w);
                }
            }
        }
        out
    }

    /// Product with the symbols treated as commuting: `(a†)^i a^j` times
    /// `(a†)^k a^l` is `(a†)^{i+k} a^{j+l}`, with no contraction terms.
    pub fn mul_commuting(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in self.terms.iter() {
            for (&(i2, j2), c2) in other.terms.iter() {
                out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Sum of all coefficients: the coherent-state expectation at `z = 1`.
    pub fn unit_expectation(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc + c.clone())
    }

    /// `⟨z| self |z⟩ = Σ c_{ij} (z*)^i z^j`, evaluated exactly.
    pub fn coherent_expectation(&self, z: &Complex<BigRational>) -> Complex<BigRational>
    where
        BigRational: From<T>,
    {
        let conj = z.conj();
        let mut total = Complex::new(BigRational::zero(), BigRational::zero());
        for (&(i, j), c) in self.terms.iter() {
            let c = BigRational::from(c.clone());
            let term = pow_complex(&conj, i) * pow_complex(z, j);
            total += term.scale(c);
        }
        total
    }
}

impl NormalForm<BigInt> {
    pub fn to_rational(&self) -> NormalForm<BigRational> {
        self.map_coeffs(|c| BigRational::from(c.clone()))
    }

    /// Floating-point evaluation of `⟨z| self |z⟩`.
    pub fn coherent_expectation_f64(&self, z: Complex<f64>) -> Complex<f64> {
        use num_traits::ToPrimitive;
        let conj = z.conj();
        self.terms.iter().fold(Complex::new(0.0, 0.0), |acc, (&(i, j), c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            acc + conj.powu(i) * z.powu(j) * c
        })
    }
}

fn pow_complex(z: &Complex<BigRational>, e: u32) -> Complex<BigRational> {
    let mut acc = Complex::new(BigRational::one(), BigRational::zero());
    for _ in 0..e {
        acc *= z.clone();
    }
    acc
}

impl<T: Coefficient + fmt::Display> fmt::Display for NormalForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, ((i, j), c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", c)?;
            match *i {
                0 => {}
                1 => f.write_str("·a†")?,
                i => write!(f, "·a†^{}", i)?,
            }
            match *j {
                0 => {}
                1 => f.write_str("·a")?,
                j => write!(f, "·a^{}", j)?,
            }
        }
        Ok(())
    }
}

/// Order in which the letter-by-letter engine picks the next `a a†` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewriteStrategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// Normal form of a word by exhaustive rewriting `a a† -> a† a + 1`.
pub fn normal_order_word(word: &BosonWord) -> NormalForm {
    normal_order_word_with(word, RewriteStrategy::Leftmost)
}

pub fn normal_order_word_with(word: &BosonWord, strategy: RewriteStrategy) -> NormalForm {
    let mut pending: BTreeMap<BosonWord, BigInt> = BTreeMap::new();
    pending.insert(word.clone(), BigInt::one());
    let mut out = NormalForm::zero();

    while let Some((w, c)) = pending.pop_first() {
        if w.is_normal() {
            let (i, j) = w.degrees();
            out.add_term(i, j, c);
            continue;
        }
        let pos = match strategy {
            RewriteStrategy::Leftmost => w.0.windows(2).position(is_disordered_pair),
            RewriteStrategy::Rightmost => w.0.windows(2).rposition(is_disordered_pair),
        }
        .expect("non-normal word has a disordered pair");

        let mut swapped = w.0.clone();
        swapped.swap(pos, pos + 1);
        let mut contracted = w.0.clone();
        contracted.drain(pos..pos + 2);

        for next in [BosonWord(swapped), BosonWord(contracted)] {
            *pending.entry(next).or_insert_with(BigInt::zero) += &c;
        }
    }
    out
}

fn is_disordered_pair(pair: &[Letter]) -> bool {
    pair[0] == Letter::Annihilate && pair[1] == Letter::Create
}

/// Normal forms of `[(a†)^r a^s]^m` for `m = 0, 1, 2, ...`, by iterated
/// multiplication.
pub fn monomial_powers(r: u32, s: u32) -> Result<impl Iterator<Item = NormalForm>> {
    MonomialSpec::new(r, s, 0)?;
    let base = NormalForm::<BigInt>::monomial(r, s);
    let mut current = Some(NormalForm::identity());
    Ok(core::iter::from_fn(move || {
        let this = current.take()?;
        current = Some(this.multiply(&base));
        Some(this)
    }))
}

/// Normal form of `[(a†)^r a^s]^n`; the identity for `n = 0`.
pub fn monomial_power_normal_form(spec: MonomialSpec) -> Result<NormalForm> {
    let spec = MonomialSpec::new(spec.r, spec.s, spec.n)?;
    let nf = monomial_powers(spec.r, spec.s)?.nth(spec.n as usize).expect("iterator is infinite");
    Ok(nf)
}

/// Reads `k -> S_{r,s}(n,k)` off the normal form of `[(a†)^r a^s]^n`, where the
/// coefficient of `(a†)^{n(r-s)+k} a^k` is `S_{r,s}(n,k)`.
pub fn extract_stirling(nf: &NormalForm, spec: MonomialSpec) -> Result<BTreeMap<u32, BigInt>> {
    let spec = MonomialSpec::new(spec.r, spec.s, spec.n)?;
    if spec.n == 0 {
        return Err(Error::InvalidArgument("Stirling rows start at n = 1"));
    }
    let excess = spec.excess();
    let range = spec.k_range();
    let mut row = BTreeMap::new();
    for (&(i, j), c) in nf.terms() {
        if i < j || i - j != excess || !range.contains(&j) {
            return Err(Error::Malformed { i, j, expected: excess });
        }
        row.insert(j, c.clone());
    }
    Ok(row)
}
