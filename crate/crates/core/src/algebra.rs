//! Finite-alphabet words, distances between words and distributions, and
//! prime-field arithmetic.
//!
//! Symbols are always integers in `[0, q)`. The ring structure of `Z_q` is
//! only used for shifts by constants and differences of words; full field
//! arithmetic is restricted to prime `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{dim, invalid, Error, Result};

/// Slack allowed when checking that distribution masses sum to one.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-12;

/// A vector over `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    q: u32,
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(q: u32, symbols: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(invalid(format!("alphabet size must be at least 2, got {q}")));
        }
        if symbols.is_empty() {
            return Err(invalid("word length must be positive"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(invalid(format!("symbol {s} outside Z_{q}")));
        }
        Ok(Self { q, symbols })
    }

    /// Builds a word without validation. Callers guarantee the invariants.
    pub(crate) fn from_raw(q: u32, symbols: Vec<u32>) -> Self {
        debug_assert!(q >= 2 && !symbols.is_empty() && symbols.iter().all(|&s| s < q));
        Self { q, symbols }
    }

    /// The all-zero word of length `n`.
    pub fn zeros(q: u32, n: usize) -> Result<Self> {
        Self::new(q, vec![0; n])
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// `self + alpha * 1` with arithmetic mod q.
    pub fn shift(&self, alpha: u32) -> Word {
        let q = self.q;
        let a = alpha % q;
        Word::from_raw(q, self.symbols.iter().map(|&s| (s + a) % q).collect())
    }

    /// Symbol-wise difference `self - other` mod q.
    pub fn difference(&self, other: &Word) -> Result<Word> {
        check_compatible(self, other)?;
        let q = self.q;
        Ok(Word::from_raw(q, self.symbols.iter().zip(&other.symbols).map(|(&a, &b)| (a + q - b) % q).collect()))
    }

    /// Number of nonzero symbols.
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn check_compatible(a: &Word, b: &Word) -> Result<()> {
    if a.q != b.q {
        return Err(dim(format!("alphabet sizes differ: {} vs {}", a.q, b.q)));
    }
    if a.len() != b.len() {
        return Err(dim(format!("word lengths differ: {} vs {}", a.len(), b.len())));
    }
    Ok(())
}

/// Number of positions at which `a` and `b` differ.
pub fn hamming_distance(a: &Word, b: &Word) -> Result<usize> {
    check_compatible(a, b)?;
    Ok(hamming_raw(&a.symbols, &b.symbols))
}

#[inline]
pub(crate) fn hamming_raw(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// A probability distribution on `Z_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    masses: Vec<f64>,
}

impl Distribution {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.len() < 2 {
            return Err(invalid("a distribution needs an alphabet of size at least 2"));
        }
        if masses.iter().any(|&m| !(m >= 0.0) || !m.is_finite()) {
            return Err(invalid("masses must be finite and nonnegative"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(invalid(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { masses })
    }

    pub fn uniform(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(invalid("alphabet size must be at least 2"));
        }
        Ok(Self { masses: vec![1.0 / q as f64; q as usize] })
    }

    pub fn alphabet_size(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }
}

/// Half the l1 distance between two distributions on the same alphabet.
pub fn statistical_distance(p: &Distribution, r: &Distribution) -> Result<f64> {
    if p.alphabet_size() != r.alphabet_size() {
        return Err(dim(format!("alphabet sizes differ: {} vs {}", p.alphabet_size(), r.alphabet_size())));
    }
    let l1: f64 = p.masses.iter().zip(&r.masses).map(|(a, b)| (a - b).abs()).sum();
    Ok(0.5 * l1)
}

/// Symbol frequencies of `c` as a distribution on `Z_q`.
pub fn empirical_distribution(c: &Word) -> Distribution {
    let counts = symbol_counts(c);
    let n = c.len() as f64;
    Distribution { masses: counts.into_iter().map(|k| k as f64 / n).collect() }
}

pub(crate) fn symbol_counts(c: &Word) -> Vec<usize> {
    let mut counts = vec![0usize; c.q as usize];
    for &s in &c.symbols {
        counts[s as usize] += 1;
    }
    counts
}

/// Statistical distance between the symbol frequencies of `c` and uniform.
///
/// Computed from integer counts as `sum |q*count_i - n| / (2 q n)` so equal
/// frequency profiles always give bit-identical results.
pub fn bias_of_word(c: &Word) -> f64 {
    let q = c.q as i64;
    let n = c.len() as i64;
    let num: i64 = symbol_counts(c).into_iter().map(|k| (q * k as i64 - n).abs()).sum();
    num as f64 / (2 * q * n) as f64
}

pub fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= q as u64 {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the prime field `GF(p)`.
///
/// The binary operators panic when the moduli differ; mixing fields is a
/// programming error rather than a data error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: u64, modulus: u32) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(invalid(format!("field modulus {modulus} is not prime")));
        }
        Ok(Self { value: (value % modulus as u64) as u32, modulus })
    }

    pub(crate) fn from_raw(value: u32, modulus: u32) -> Self {
        Self { value: value % modulus, modulus }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let p = self.modulus as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Self { value: acc as u32, modulus: self.modulus }
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::Domain(format!("zero has no inverse mod {}", self.modulus)));
        }
        Ok(self.pow(self.modulus as u64 - 2))
    }

    fn same_field(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "field elements from different fields");
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_field(rhs);
        let p = self.modulus as u64;
        Self { value: ((self.value as u64 + rhs.value as u64) % p) as u32, modulus: self.modulus }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.same_field(rhs);
        let p = self.modulus as u64;
        Self { value: ((self.value as u64 + p - rhs.value as u64) % p) as u32, modulus: self.modulus }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(rhs);
        let p = self.modulus as u64;
        Self { value: ((self.value as u64 * rhs.value as u64) % p) as u32, modulus: self.modulus }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}
