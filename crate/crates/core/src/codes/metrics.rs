use serde::{Deserialize, Serialize};

use super::Code;
use crate::algebra::{hamming_raw, symbol_counts};
use crate::enumerate::{binomial, par_partitions, Caps};
use crate::error::{invalid, Error, Result};

/// Extremal (average) distance over a family of codeword subsets.
///
/// `absolute` is the total pairwise Hamming distance of the witness subset
/// and `pairs` the number of pairs summed, so `relative` equals
/// `absolute / (n * pairs)`. For plain minimum distance `pairs` is 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub absolute: u64,
    pub pairs: u64,
    pub block_length: usize,
    pub relative: f64,
    pub witness: Vec<usize>,
    pub subsets_checked: u128,
}

impl DistanceReport {
    /// Exact comparison of two relative values, free of rounding.
    pub fn relative_cmp(&self, other: &DistanceReport) -> std::cmp::Ordering {
        let lhs = self.absolute as u128 * other.pairs as u128 * other.block_length as u128;
        let rhs = other.absolute as u128 * self.pairs as u128 * self.block_length as u128;
        lhs.cmp(&rhs)
    }
}

/// Maximum deviation from uniform over a family of subsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub bias: f64,
    pub witness: Vec<usize>,
    pub subsets_checked: u128,
}

fn distance_table(c: &Code) -> Vec<u32> {
    let m = c.len();
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let d = hamming_raw(c.words()[i].symbols(), c.words()[j].symbols()) as u32;
            table[i * m + j] = d;
            table[j * m + i] = d;
        }
    }
    table
}

#[derive(Clone)]
struct Extremes {
    min: (u64, Vec<usize>),
    max: (u64, Vec<usize>),
    count: u128,
}

impl Extremes {
    fn merge(self, other: Extremes) -> Extremes {
        // self precedes other lexicographically, so ties keep self
        let min = if other.min.0 < self.min.0 { other.min } else { self.min };
        let max = if other.max.0 > self.max.0 { other.max } else { self.max };
        Extremes { min, max, count: self.count + other.count }
    }
}

/// Smallest and largest total pairwise distance over all `l`-subsets, with
/// the lexicographically first subset attaining each.
fn subset_distance_extremes(c: &Code, l: usize) -> Extremes {
    let m = c.len();
    let table = distance_table(c);
    let parts = par_partitions(m, l, |mut combos| {
        let mut prefix = vec![0u64; l];
        let mut best: Option<Extremes> = None;
        while let Some((idx, changed)) = combos.next_combo() {
            for pos in changed..l {
                let row = idx[pos] * m;
                let add: u64 = idx[..pos].iter().map(|&j| table[row + j] as u64).sum();
                prefix[pos] = if pos == 0 { 0 } else { prefix[pos - 1] } + add;
            }
            let total = prefix[l - 1];
            match &mut best {
                None => best = Some(Extremes { min: (total, idx.to_vec()), max: (total, idx.to_vec()), count: 1 }),
                Some(b) => {
                    b.count += 1;
                    if total < b.min.0 {
                        b.min = (total, idx.to_vec());
                    }
                    if total > b.max.0 {
                        b.max = (total, idx.to_vec());
                    }
                }
            }
        }
        best
    });
    parts.into_iter().flatten().reduce(Extremes::merge).expect("at least one subset")
}

/// Minimum pairwise Hamming distance, with the first pair attaining it.
pub fn min_distance(c: &Code, caps: &Caps) -> Result<DistanceReport> {
    if c.len() < 2 {
        return Err(Error::Domain("minimum distance of a single-word code is undefined".into()));
    }
    lwise_distance(c, 2, caps)
}

/// Minimum over all `l`-subsets of the average relative pairwise distance.
pub fn lwise_distance(c: &Code, l: usize, caps: &Caps) -> Result<DistanceReport> {
    if l < 2 || l > c.len() {
        return Err(invalid(format!("L must lie in [2, {}], got {l}", c.len())));
    }
    caps.check_subsets("codeword subsets", binomial(c.len(), l))?;
    let ext = subset_distance_extremes(c, l);
    let pairs = (l * (l - 1) / 2) as u64;
    let n = c.block_length();
    Ok(DistanceReport {
        absolute: ext.min.0,
        pairs,
        block_length: n,
        relative: ext.min.0 as f64 / (n as u64 * pairs) as f64,
        witness: ext.min.1,
        subsets_checked: ext.count,
    })
}

/// Largest statistical distance from uniform of a codeword difference.
pub fn code_bias(c: &Code, caps: &Caps) -> Result<BiasReport> {
    if c.len() < 2 {
        return Err(Error::Domain("bias of a single-word code is undefined".into()));
    }
    caps.check_subsets("codeword pairs", binomial(c.len(), 2))?;
    let q = c.alphabet_size() as i64;
    let n = c.block_length() as i64;
    let words = c.words();
    // c - c' and c' - c have permuted symbol profiles, so unordered pairs suffice
    let parts = par_partitions(c.len(), 2, |mut combos| {
        let mut best: Option<(i64, Vec<usize>)> = None;
        let mut count = 0u128;
        while let Some((idx, _)) = combos.next_combo() {
            count += 1;
            let diff = words[idx[0]].difference(&words[idx[1]]).expect("same code");
            let num: i64 = symbol_counts(&diff).into_iter().map(|k| (q * k as i64 - n).abs()).sum();
            if best.as_ref().is_none_or(|b| num > b.0) {
                best = Some((num, idx.to_vec()));
            }
        }
        (best, count)
    });
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut count = 0;
    for (b, k) in parts {
        count += k;
        if let Some(b) = b {
            if best.as_ref().is_none_or(|cur| b.0 > cur.0) {
                best = Some(b);
            }
        }
    }
    let (num, witness) = best.expect("at least one pair");
    Ok(BiasReport { bias: num as f64 / (2 * q * n) as f64, witness, subsets_checked: count })
}

/// Largest deviation of the `l`-wise average distance from 1/2, binary codes only.
pub fn lwise_bias(c: &Code, l: usize, caps: &Caps) -> Result<BiasReport> {
    if c.alphabet_size() != 2 {
        return Err(Error::Unsupported("L-wise bias is defined for binary codes only".into()));
    }
    if l < 2 || l > c.len() {
        return Err(invalid(format!("L must lie in [2, {}], got {l}", c.len())));
    }
    caps.check_subsets("codeword subsets", binomial(c.len(), l))?;
    let ext = subset_distance_extremes(c, l);
    let np = (c.block_length() * l * (l - 1) / 2) as i64;
    let lo = (2 * ext.min.0 as i64 - np).abs();
    let hi = (2 * ext.max.0 as i64 - np).abs();
    let (num, witness) = if hi > lo || (hi == lo && ext.max.1 < ext.min.1) { (hi, ext.max.1) } else { (lo, ext.min.1) };
    Ok(BiasReport { bias: num as f64 / (2 * np) as f64, witness, subsets_checked: ext.count })
}
