//! Exhaustive certifiers: coherence, RIP-2, flat RIP and kernel injectivity.
//!
//! Every certifier enumerates all relevant column subsets (no sampling), in
//! parallel over the smallest subset element, and reduces in ascending order
//! so the reported witness is the lexicographically first extremal subset
//! regardless of worker count.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::enumerate::{binomial, par_partitions, Caps, Combinations};
use crate::error::{invalid, Error, Result};
use crate::linalg::{extreme_singular_values_from_gram, singular_values};
use crate::matrix::ComplexMatrix;

pub const UNIT_NORM_TOLERANCE: f64 = 1e-9;
pub const RANK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub coherence: f64,
    pub witness: [usize; 2],
    pub max_norm_deviation: f64,
    pub pairs_checked: u128,
}

pub fn coherence(m: &ComplexMatrix) -> Result<CoherenceReport> {
    let n = m.cols();
    if n < 2 {
        return Err(invalid("coherence needs at least two columns"));
    }
    let mut best = (-1.0, [0, 1]);
    for a in 0..n {
        for b in a + 1..n {
            let v = m.inner(a, b).norm();
            if v > best.0 {
                best = (v, [a, b]);
            }
        }
    }
    Ok(CoherenceReport {
        coherence: best.0,
        witness: best.1,
        max_norm_deviation: max_norm_deviation(m),
        pairs_checked: binomial(n, 2),
    })
}

pub fn max_norm_deviation(m: &ComplexMatrix) -> f64 {
    (0..m.cols()).map(|j| (m.column_norm(j) - 1.0).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipReport {
    pub order: usize,
    pub constant: f64,
    pub witness: Vec<usize>,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub subsets_checked: u128,
}

fn sub_gram(gram: &[Complex64], n: usize, idx: &[usize], out: &mut Vec<Complex64>) {
    out.clear();
    for &a in idx {
        for &b in idx {
            out.push(gram[a * n + b]);
        }
    }
}

/// Smallest `alpha` with `(1 - alpha)|x| <= |M x| <= (1 + alpha)|x|` for all
/// `x` supported on at most `l` columns.
///
/// By eigenvalue interlacing, the extreme singular values over subsets of
/// size at most `l` are attained on subsets of size exactly `l`, so only
/// those are enumerated.
pub fn rip2_constant(m: &ComplexMatrix, l: usize, caps: &Caps) -> Result<RipReport> {
    let n = m.cols();
    if l == 0 || l > n {
        return Err(invalid(format!("order must lie in 1..={n}, got {l}")));
    }
    let total = binomial(n, l);
    caps.check_subsets("rip2 subsets", total)?;
    let gram = m.gram();
    type Best = (f64, Vec<usize>, f64, f64);
    let parts: Vec<Result<Option<Best>>> = par_partitions(n, l, |mut combos| {
        let mut best: Option<Best> = None;
        let mut g = Vec::with_capacity(l * l);
        while let Some((idx, _)) = combos.next_combo() {
            sub_gram(&gram, n, idx, &mut g);
            let (lo, hi) = extreme_singular_values_from_gram(&g, l)?;
            let dev = (1.0 - lo).max(hi - 1.0);
            if best.as_ref().is_none_or(|b| dev > b.0) {
                best = Some((dev, idx.to_vec(), lo, hi));
            }
        }
        Ok(best)
    });
    let mut best: Option<Best> = None;
    for p in parts {
        if let Some(b) = p? {
            if best.as_ref().is_none_or(|cur| b.0 > cur.0) {
                best = Some(b);
            }
        }
    }
    let (constant, witness, sigma_min, sigma_max) = best.expect("at least one subset");
    Ok(RipReport { order: l, constant, witness, sigma_min, sigma_max, subsets_checked: total })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatRipReport {
    pub order: usize,
    pub constant: f64,
    pub witness: (Vec<usize>, Vec<usize>),
    pub unit_norm_ok: bool,
    pub subsets_checked: u128,
}

fn flat_pairs(n: usize, l0: usize) -> u128 {
    (1..=l0.min(n / 2))
        .map(|l| binomial(n, 2 * l).saturating_mul(binomial(2 * l - 1, l - 1)))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Smallest `alpha` with `|<sum_{L1} M_i, sum_{L2} M_i>| <= alpha |L1|` for all
/// disjoint `L1`, `L2` of equal size at most `l0`.
pub fn flat_rip_constant(m: &ComplexMatrix, l0: usize, caps: &Caps) -> Result<FlatRipReport> {
    let n = m.cols();
    if l0 == 0 || n < 2 {
        return Err(invalid("flat RIP needs order >= 1 and at least two columns"));
    }
    let dev = max_norm_deviation(m);
    if dev > UNIT_NORM_TOLERANCE {
        return Err(Error::Precondition(format!("columns must be unit norm, deviation {dev:e}")));
    }
    let total = flat_pairs(n, l0);
    caps.check_subsets("flat RIP set pairs", total)?;
    let gram = m.gram();
    type Best = (f64, Vec<usize>, Vec<usize>);
    let mut best: Option<Best> = None;
    for l in 1..=l0.min(n / 2) {
        let parts = par_partitions(n, 2 * l, |mut combos| {
            let mut best: Option<Best> = None;
            let mut left = Vec::with_capacity(l);
            let mut right = Vec::with_capacity(l);
            while let Some((t, _)) = combos.next_combo() {
                // L1 always holds t[0]; choose its other l - 1 members from t[1..].
                let mut splits = Combinations::new(2 * l - 1, l - 1);
                while let Some((pick, _)) = splits.next_combo() {
                    left.clear();
                    right.clear();
                    left.push(t[0]);
                    let mut p = 0;
                    for (pos, &x) in t[1..].iter().enumerate() {
                        if p < pick.len() && pick[p] == pos {
                            left.push(x);
                            p += 1;
                        } else {
                            right.push(x);
                        }
                    }
                    let mut s = Complex64::new(0.0, 0.0);
                    for &a in &left {
                        for &b in &right {
                            s += gram[a * n + b];
                        }
                    }
                    let v = s.norm() / l as f64;
                    if best.as_ref().is_none_or(|b| v > b.0) {
                        best = Some((v, left.clone(), right.clone()));
                    }
                }
            }
            best
        });
        for b in parts.into_iter().flatten() {
            if best.as_ref().is_none_or(|cur| b.0 > cur.0) {
                best = Some(b);
            }
        }
    }
    let (constant, l1, l2) = best.expect("at least one pair");
    Ok(FlatRipReport { order: l0, constant, witness: (l1, l2), unit_norm_ok: true, subsets_checked: total })
}

/// Flat-RIP constant at order `l0` implied by a RIP-2 constant `alpha` at
/// order `2 l0`, via polarization: `((1+a)^2 - max(0, 1-a)^2) / 2`, which is
/// `2a` for `a <= 1`, capped by the trivial bound `l0`. Never exceeds `4a`
/// when `a <= 3 + 2 sqrt 2` or `l0 <= 4a`.
pub fn flat_bound_from_rip2(alpha: f64, l0: usize) -> f64 {
    let lo = (1.0 - alpha).max(0.0);
    (((1.0 + alpha).powi(2) - lo * lo) / 2.0).min(l0 as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub order: usize,
    pub subset_size: usize,
    pub injective: bool,
    pub min_singular_value: f64,
    /// Subset with the smallest singular value.
    pub witness: Vec<usize>,
    /// Right singular vector of that subset, as `[re, im]` pairs; a kernel
    /// vector when `injective` is false.
    pub kernel_vector: Vec<[f64; 2]>,
    pub subsets_checked: u128,
}

/// Whether every `min(2l, N)` columns are linearly independent, which makes
/// `M` injective on `l`-sparse vectors.
pub fn kernel_injectivity(m: &ComplexMatrix, l: usize, caps: &Caps) -> Result<KernelReport> {
    let n = m.cols();
    if l == 0 {
        return Err(invalid("order must be at least 1"));
    }
    let s = (2 * l).min(n);
    let total = binomial(n, s);
    caps.check_subsets("kernel subsets", total)?;
    let rows = m.rows();
    type Best = (f64, Vec<usize>, Vec<Complex64>);
    let parts: Vec<Result<Option<Best>>> = par_partitions(n, s, |mut combos| {
        let mut best: Option<Best> = None;
        let mut data = Vec::with_capacity(rows * s);
        while let Some((idx, _)) = combos.next_combo() {
            data.clear();
            for &j in idx {
                data.extend_from_slice(m.column(j));
            }
            let (vals, v) = singular_values(&data, rows, s)?;
            if best.as_ref().is_none_or(|b| vals[0] < b.0) {
                best = Some((vals[0], idx.to_vec(), v));
            }
        }
        Ok(best)
    });
    let mut best: Option<Best> = None;
    for p in parts {
        if let Some(b) = p? {
            if best.as_ref().is_none_or(|cur| b.0 < cur.0) {
                best = Some(b);
            }
        }
    }
    let (sigma, witness, v) = best.expect("at least one subset");
    Ok(KernelReport {
        order: l,
        subset_size: s,
        injective: sigma > RANK_TOLERANCE,
        min_singular_value: sigma,
        witness,
        kernel_vector: v.iter().map(|z| [z.re, z.im]).collect(),
        subsets_checked: total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Translation {
    pub value: f64,
    /// Whether `l >= 2^10`, the regime in which the translation is proven.
    pub valid: bool,
}

/// `44 alpha log2(l)`: the RIP-2 constant implied by flat RIP with constant
/// `alpha` at order `l`. A calculator only; no matrix is inspected.
pub fn translate_flat_to_rip(alpha: f64, l: usize) -> Result<Translation> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be finite and nonnegative, got {alpha}")));
    }
    if l < 2 {
        return Err(invalid(format!("order must be at least 2, got {l}")));
    }
    Ok(Translation { value: 44.0 * alpha * (l as f64).log2(), valid: l >= 1024 })
}
