//! Enumeration caps and lexicographic combination walking.
//!
//! Every exhaustive certifier counts its work up front and refuses to start
//! when the count exceeds the relevant cap. There is no sampling fallback.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable that overrides every enumeration cap.
pub const CAP_ENV_VAR: &str = "SPARSECODE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Maximum number of codewords materialized from a generator matrix.
    pub codewords: u128,
    /// Maximum number of subsets visited by a subset certifier.
    pub subsets: u128,
    /// Maximum number of Hamming-ball centers visited.
    pub centers: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self { codewords: 1 << 20, subsets: 10_000_000, centers: 1 << 22 }
    }
}

impl Caps {
    /// One value for all three caps.
    pub fn uniform(cap: u128) -> Self {
        Self { codewords: cap, subsets: cap, centers: cap }
    }

    /// Defaults, unless `SPARSECODE_CAP` holds a positive integer.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAP_ENV_VAR) {
            Ok(v) => v
                .trim()
                .parse::<u128>()
                .ok()
                .filter(|&c| c > 0)
                .map(Self::uniform)
                .ok_or_else(|| Error::Parse(format!("{CAP_ENV_VAR}={v:?} is not a positive integer"))),
            Err(_) => Ok(Self::default()),
        }
    }

    pub(crate) fn check_subsets(&self, what: &'static str, required: u128) -> Result<()> {
        check(what, required, self.subsets)
    }

    pub(crate) fn check_codewords(&self, what: &'static str, required: u128) -> Result<()> {
        check(what, required, self.codewords)
    }

    pub(crate) fn check_centers(&self, what: &'static str, required: u128) -> Result<()> {
        check(what, required, self.centers)
    }
}

fn check(what: &'static str, required: u128, cap: u128) -> Result<()> {
    if required > cap {
        Err(Error::CapExceeded { what, required, cap })
    } else {
        Ok(())
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `q^n`, saturating.
pub fn power(q: u32, n: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

/// Lexicographic walk over k-subsets of `0..n`.
///
/// `next_combo` also reports the leftmost position that changed since the
/// previous combination, so callers can maintain prefix state incrementally.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    floor: usize,
    started: bool,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self { n, idx: (0..k).collect(), floor: 0, started: false, done: k > n }
    }

    /// Only the k-subsets whose smallest element is `first`.
    pub(crate) fn with_first(n: usize, k: usize, first: usize) -> Self {
        assert!(k >= 1);
        Self { n, idx: (first..first + k).collect(), floor: 1, started: false, done: first + k > n }
    }

    pub(crate) fn next_combo(&mut self) -> Option<(&[usize], usize)> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some((&self.idx, 0));
        }
        let k = self.idx.len();
        let mut i = k;
        while i > self.floor {
            i -= 1;
            if self.idx[i] < self.n - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some((&self.idx, i));
            }
        }
        self.done = true;
        None
    }
}

/// Runs `f` once per possible smallest element of a k-subset of `0..n`, in
/// parallel, and returns the per-partition results in ascending order of that
/// element. Reductions over the returned vector are therefore independent of
/// the worker count.
pub(crate) fn par_partitions<T, F>(n: usize, k: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Combinations) -> T + Sync + Send,
{
    if k == 0 || k > n {
        return Vec::new();
    }
    (0..=n - k).into_par_iter().map(|first| f(Combinations::with_first(n, k, first))).collect()
}
