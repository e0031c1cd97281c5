//! Designs, disjunct matrices and OR-channel group testing.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{min_distance, reed_solomon, Code};
use crate::enumerate::{binomial, Caps, Combinations};
use crate::error::{dim, invalid, Error, Result};
use crate::matrix::BinaryMatrix;

/// A family of equal-size subsets of `0..ground_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    ground_size: usize,
    set_size: usize,
    sets: Vec<Vec<usize>>,
}

impl Design {
    pub fn new(ground_size: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let first = sets.first().ok_or_else(|| invalid("a design needs at least one set"))?;
        let set_size = first.len();
        let mut out = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            s.dedup();
            if s.len() != set_size {
                return Err(invalid(format!("set {i} has {} distinct elements, expected {set_size}", s.len())));
            }
            if s.last().is_some_and(|&x| x >= ground_size) {
                return Err(dim(format!("set {i} leaves the ground set of size {ground_size}")));
            }
            out.push(s);
        }
        Ok(Self { ground_size, set_size, sets: out })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Set `i` is the support of the Boolean embedding of codeword `i`: position
/// `j` with symbol `s` becomes element `j q + s`.
pub fn design_from_code(c: &Code) -> Design {
    let q = c.alphabet_size() as usize;
    let sets =
        c.words().iter().map(|w| w.symbols().iter().enumerate().map(|(j, &s)| j * q + s as usize).collect()).collect();
    Design::new(q * c.block_length(), sets).expect("embedded codewords have one element per block")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignReport {
    pub ground_size: usize,
    pub set_size: usize,
    pub r: usize,
    pub witness: Option<[usize; 2]>,
    pub pairs_checked: u128,
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// Exact largest pairwise intersection, with the first pair attaining it.
pub fn verify_design(d: &Design) -> DesignReport {
    let mut best: Option<(usize, [usize; 2])> = None;
    for a in 0..d.len() {
        for b in a + 1..d.len() {
            let k = intersection_size(&d.sets[a], &d.sets[b]);
            if best.is_none_or(|(r, _)| k > r) {
                best = Some((k, [a, b]));
            }
        }
    }
    DesignReport {
        ground_size: d.ground_size,
        set_size: d.set_size,
        r: best.map_or(0, |b| b.0),
        witness: best.map(|b| b.1),
        pairs_checked: binomial(d.len(), 2),
    }
}

/// Column `i` is the characteristic vector of set `i`.
pub fn matrix_from_design(d: &Design) -> BinaryMatrix {
    BinaryMatrix::from_supports(d.ground_size, &d.sets).expect("design sets lie in the ground set")
}

/// A column whose support is covered by `cover`, `|cover| = L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjunctWitness {
    pub column: usize,
    pub cover: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjunctReport {
    pub order: usize,
    pub disjunct: bool,
    pub witness: Option<DisjunctWitness>,
    /// Number of (column, L other columns) pairs the verdict covers.
    pub pairs_checked: u128,
    /// Search nodes actually visited; exact pruning skips the rest.
    pub nodes_visited: u128,
}

struct CoverSearch<'a> {
    restrictions: &'a [Vec<u64>],
    suffix_max: &'a [u32],
    order: usize,
    nodes: u128,
    chosen: Vec<usize>,
}

impl CoverSearch<'_> {
    /// Depth-first over candidate columns in increasing order; true once the
    /// chosen prefix covers everything.
    fn run(&mut self, start: usize, uncovered: &[u64]) -> bool {
        self.nodes += 1;
        let left: u32 = uncovered.iter().map(|b| b.count_ones()).sum();
        if left == 0 {
            return true;
        }
        let remaining = self.order - self.chosen.len();
        if remaining == 0 || start >= self.restrictions.len() {
            return false;
        }
        if left as u64 > remaining as u64 * self.suffix_max[start] as u64 {
            return false;
        }
        let mut next = vec![0u64; uncovered.len()];
        for i in start..self.restrictions.len() {
            for (n, (u, r)) in next.iter_mut().zip(uncovered.iter().zip(&self.restrictions[i])) {
                *n = u & !r;
            }
            self.chosen.push(i);
            if self.run(i + 1, &next) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Looks for `L` columns other than `j0` whose supports cover `supp(M_j0)`.
fn find_cover(m: &BinaryMatrix, j0: usize, order: usize) -> (Option<Vec<usize>>, u128) {
    let target = m.column_bits(j0);
    let mut ids = Vec::new();
    let mut restrictions = Vec::new();
    for j in (0..m.cols()).filter(|&j| j != j0) {
        let r: Vec<u64> = m.column_bits(j).iter().zip(target).map(|(a, b)| a & b).collect();
        if r.iter().any(|&b| b != 0) {
            ids.push(j);
            restrictions.push(r);
        }
    }
    let mut suffix_max = vec![0u32; restrictions.len() + 1];
    for i in (0..restrictions.len()).rev() {
        let w = restrictions[i].iter().map(|b| b.count_ones()).sum::<u32>();
        suffix_max[i] = suffix_max[i + 1].max(w);
    }
    let mut search =
        CoverSearch { restrictions: &restrictions, suffix_max: &suffix_max, order, nodes: 0, chosen: Vec::new() };
    let found = search.run(0, target);
    let nodes = search.nodes;
    if !found {
        return (None, nodes);
    }
    // Pad a short cover with the smallest unused columns.
    let mut cover: Vec<usize> = search.chosen.iter().map(|&i| ids[i]).collect();
    let mut j = 0;
    while cover.len() < order {
        if j != j0 && !cover.contains(&j) {
            cover.push(j);
        }
        j += 1;
    }
    cover.sort_unstable();
    (Some(cover), nodes)
}

/// Whether no column's support is covered by the union of any `L` others.
///
/// The witness is the smallest failing column, with the first cover found
/// among the columns meeting its support in increasing order.
pub fn verify_disjunct(m: &BinaryMatrix, order: usize, caps: &Caps) -> Result<DisjunctReport> {
    let n = m.cols();
    if order + 1 > n {
        return Err(invalid(format!("order {order} needs at least {} columns, have {n}", order + 1)));
    }
    let pairs = binomial(n, order + 1).saturating_mul(order as u128 + 1);
    caps.check_subsets("disjunctness pairs", pairs)?;
    let results: Vec<(Option<Vec<usize>>, u128)> = (0..n).into_par_iter().map(|j0| find_cover(m, j0, order)).collect();
    let nodes_visited = results.iter().map(|r| r.1).sum();
    let witness = results
        .into_iter()
        .enumerate()
        .find_map(|(j0, (cover, _))| cover.map(|cover| DisjunctWitness { column: j0, cover }));
    Ok(DisjunctReport { order, disjunct: witness.is_none(), witness, pairs_checked: pairs, nodes_visited })
}

/// Largest `L` for which `M` is `L`-disjunct; 0 if not even 1-disjunct.
pub fn max_disjunct_order(m: &BinaryMatrix, caps: &Caps) -> Result<usize> {
    let mut best = 0;
    for l in 1..m.cols() {
        if !verify_disjunct(m, l, caps)?.disjunct {
            break;
        }
        best = l;
    }
    Ok(best)
}

/// `y(i) = OR_j (M[i][j] AND x[j])`.
pub fn gt_encode(m: &BinaryMatrix, x: &[bool]) -> Result<Vec<bool>> {
    if x.len() != m.cols() {
        return Err(dim(format!("input of length {} for {} columns", x.len(), m.cols())));
    }
    let mut acc = vec![0u64; m.blocks()];
    for (j, _) in x.iter().enumerate().filter(|(_, &b)| b) {
        for (a, b) in acc.iter_mut().zip(m.column_bits(j)) {
            *a |= b;
        }
    }
    Ok((0..m.rows()).map(|i| acc[i / 64] >> (i % 64) & 1 == 1).collect())
}

/// Item `j` is declared present iff every test containing it is positive.
pub fn gt_decode_cover(m: &BinaryMatrix, y: &[bool]) -> Result<Vec<bool>> {
    if y.len() != m.rows() {
        return Err(dim(format!("outcome of length {} for {} rows", y.len(), m.rows())));
    }
    let mut pos = vec![0u64; m.blocks()];
    for (i, _) in y.iter().enumerate().filter(|(_, &b)| b) {
        pos[i / 64] |= 1 << (i % 64);
    }
    Ok((0..m.cols()).map(|j| m.column_bits(j).iter().zip(&pos).all(|(c, p)| c & !p == 0)).collect())
}

/// Exhaustive round trips are used up to this many supports.
pub const EXHAUSTIVE_ROUNDTRIP_LIMIT: u128 = 100_000;
pub const SAMPLED_ROUNDTRIPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub max_weight: usize,
    pub exhaustive: bool,
    pub vectors_checked: u64,
    pub failures: u64,
    pub first_failure: Option<Vec<usize>>,
}

fn roundtrip_support(m: &BinaryMatrix, support: &[usize]) -> Result<bool> {
    let mut x = vec![false; m.cols()];
    for &j in support {
        x[j] = true;
    }
    Ok(gt_decode_cover(m, &gt_encode(m, &x)?)? == x)
}

/// Encode then decode every input of weight at most `max_weight` (or, past
/// the exhaustive limit, a seeded sample of them).
pub fn gt_roundtrip(m: &BinaryMatrix, max_weight: usize, seed: u64) -> Result<RoundtripReport> {
    let n = m.cols();
    if max_weight > n {
        return Err(invalid(format!("weight {max_weight} exceeds {n} columns")));
    }
    let total: u128 = (0..=max_weight).map(|w| binomial(n, w)).fold(0, u128::saturating_add);
    let exhaustive = total <= EXHAUSTIVE_ROUNDTRIP_LIMIT;
    let supports: Vec<Vec<usize>> = if exhaustive {
        let mut all = Vec::with_capacity(total as usize);
        for w in 0..=max_weight {
            let mut combos = Combinations::new(n, w);
            while let Some((s, _)) = combos.next_combo() {
                all.push(s.to_vec());
            }
        }
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_ROUNDTRIPS)
            .map(|i| {
                let mut s = sample(&mut rng, n, i % (max_weight + 1)).into_vec();
                s.sort_unstable();
                s
            })
            .collect()
    };
    let outcomes: Vec<bool> = supports.par_iter().map(|s| roundtrip_support(m, s)).collect::<Result<_>>()?;
    let failures = outcomes.iter().filter(|&&ok| !ok).count() as u64;
    let first_failure = outcomes.iter().position(|&ok| !ok).map(|i| supports[i].clone());
    Ok(RoundtripReport { max_weight, exhaustive, vectors_checked: supports.len() as u64, failures, first_failure })
}

/// Parameters recorded alongside a Kautz-Singleton matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KautzSingletonRecord {
    pub q: u32,
    pub k: usize,
    pub block_length: usize,
    pub code_min_distance: u64,
    /// `n' - d`, the intersection bound the code guarantees.
    pub r_bound: usize,
    /// Largest `L` with `L r < n'`, or `N - 1` when `r = 0`.
    pub guaranteed_order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KautzSingleton {
    pub matrix: BinaryMatrix,
    pub design: Design,
    pub record: KautzSingletonRecord,
}

/// Largest `L` with `L r < n'` (every `L` up to `N - 1` when `r = 0`).
pub fn guaranteed_disjunct_order(r: usize, n_prime: usize, columns: usize) -> usize {
    if r == 0 {
        columns.saturating_sub(1)
    } else {
        ((n_prime - 1) / r).min(columns.saturating_sub(1))
    }
}

/// Reed-Solomon code over all `q` points, Boolean-embedded: a `q^2 x q^k`
/// matrix.
pub fn kautz_singleton(q: u32, k: usize, caps: &Caps) -> Result<KautzSingleton> {
    let code = reed_solomon(q, k, caps)?;
    let design = design_from_code(&code);
    let matrix = matrix_from_design(&design);
    let n_prime = q as usize;
    let d = if code.len() >= 2 { min_distance(&code, caps)?.absolute } else { n_prime as u64 };
    let r_bound = n_prime - d as usize;
    let record = KautzSingletonRecord {
        q,
        k,
        block_length: n_prime,
        code_min_distance: d,
        r_bound,
        guaranteed_order: guaranteed_disjunct_order(r_bound, n_prime, code.len()),
    };
    Ok(KautzSingleton { matrix, design, record })
}

impl TryFrom<&BinaryMatrix> for Design {
    type Error = Error;

    /// Reads the column supports back as a design; columns must share a weight.
    fn try_from(m: &BinaryMatrix) -> Result<Self> {
        Design::new(m.rows(), (0..m.cols()).map(|j| m.column_support(j)).collect())
    }
}
