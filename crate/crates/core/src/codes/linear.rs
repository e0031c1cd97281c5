use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Code;
use crate::algebra::{is_prime, FieldElement, Word};
use crate::bounds::q_ary_entropy;
use crate::enumerate::{power, Caps};
use crate::error::{invalid, Error, Result};

/// Default number of generator matrices sampled before giving up.
pub const GV_RETRY_BUDGET: u32 = 200;

/// A linear code over a prime field given by a full-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCode {
    q: u32,
    n: usize,
    generator: Vec<Vec<u32>>,
}

impl LinearCode {
    pub fn new(q: u32, generator: Vec<Vec<u32>>) -> Result<Self> {
        if !is_prime(q) {
            return Err(invalid(format!("linear codes need a prime alphabet, got {q}")));
        }
        let k = generator.len();
        let n = generator.first().map(Vec::len).unwrap_or(0);
        if k == 0 || n == 0 || k > n {
            return Err(invalid(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        if generator.iter().any(|row| row.len() != n || row.iter().any(|&s| s >= q)) {
            return Err(invalid("generator rows must have common length and symbols in Z_q"));
        }
        if rank_mod_p(&generator, q) != k {
            return Err(invalid("generator matrix is not full rank"));
        }
        Ok(Self { q, n, generator })
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn dimension(&self) -> usize {
        self.generator.len()
    }

    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> Vec<Vec<FieldElement>> {
        self.generator.iter().map(|row| row.iter().map(|&v| FieldElement::from_raw(v, self.q)).collect()).collect()
    }

    pub fn generator_rows(&self) -> &[Vec<u32>] {
        &self.generator
    }

    /// Walks every codeword `m G` in odometer order of the message `m`,
    /// starting with the zero word. Stops early when `f` returns false.
    fn for_each_codeword(&self, mut f: impl FnMut(&[u32]) -> bool) {
        let q = self.q;
        let k = self.dimension();
        let mut digits = vec![0u32; k];
        let mut word = vec![0u32; self.n];
        if !f(&word) {
            return;
        }
        loop {
            // increment the odometer; every digit that moves adds its row once
            // (a wrap q-1 -> 0 is also +1 mod q)
            let mut j = k;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                for (w, &g) in word.iter_mut().zip(&self.generator[j]) {
                    *w = (*w + g) % q;
                }
                digits[j] += 1;
                if digits[j] < q {
                    break;
                }
                digits[j] = 0;
            }
            if !f(&word) {
                return;
            }
        }
    }

    /// Minimum weight of a nonzero codeword, which equals the minimum
    /// distance of a linear code. Returns early once the weight drops below
    /// `floor`.
    fn min_nonzero_weight(&self, floor: usize) -> usize {
        let mut best = self.n;
        let mut first = true;
        self.for_each_codeword(|w| {
            if first {
                first = false;
                return true;
            }
            let wt = w.iter().filter(|&&s| s != 0).count();
            best = best.min(wt);
            best >= floor
        });
        best
    }
}

fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&v| v as u64).collect()).collect();
    let p64 = p as u64;
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = FieldElement::from_raw(m[rank][col] as u32, p).inv().expect("nonzero pivot").value() as u64;
        for v in m[rank].iter_mut() {
            *v = *v * inv % p64;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..cols {
                    m[r][c] = (m[r][c] + p64 * p64 - factor * m[rank][c]) % p64;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// All `q^k` codewords of a linear code.
pub fn enumerate_codewords(lc: &LinearCode, caps: &Caps) -> Result<Code> {
    caps.check_codewords("codewords", power(lc.q, lc.dimension()))?;
    let mut words = Vec::with_capacity(power(lc.q, lc.dimension()) as usize);
    lc.for_each_codeword(|w| {
        words.push(Word::from_raw(lc.q, w.to_vec()));
        true
    });
    Code::new(lc.q, lc.n, words)
}

/// Result of rejection sampling a linear code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GvSample {
    pub code: LinearCode,
    /// Generator matrices drawn, including the accepted one.
    pub attempts: u32,
    /// Minimum distance of the accepted code.
    pub min_distance: usize,
}

/// Samples uniformly random `k x n` generator matrices from a seeded stream
/// until one has full rank and minimum distance at least `min_distance`.
///
/// With `force_ones` the first generator row is the all-ones word, which
/// makes the code balanced.
pub fn sample_linear_code(
    q: u32,
    n: usize,
    k: usize,
    min_distance: usize,
    seed: u64,
    force_ones: bool,
    retry_budget: u32,
    caps: &Caps,
) -> Result<GvSample> {
    if !is_prime(q) {
        return Err(invalid(format!("alphabet size {q} is not prime")));
    }
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    caps.check_codewords("codewords", power(q, k))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=retry_budget {
        let mut rows: Vec<Vec<u32>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..q)).collect()).collect();
        if force_ones {
            rows[0] = vec![1; n];
        }
        if rank_mod_p(&rows, q) != k {
            continue;
        }
        let lc = LinearCode { q, n, generator: rows };
        let d = lc.min_nonzero_weight(min_distance);
        if d >= min_distance {
            return Ok(GvSample { code: lc, attempts: attempt, min_distance: d });
        }
    }
    Err(Error::ConstructionFailed {
        attempts: retry_budget,
        reason: format!("no [{n},{k}]_{q} code with minimum distance >= {min_distance} found"),
    })
}

/// Dimension targeted by the random construction: `floor((1 - h_q(delta) - slack) n)`.
pub(crate) fn gv_dimension(q: u32, n: usize, delta: f64, slack: f64) -> Result<usize> {
    let qf = q as f64;
    if !(0.0..1.0 - 1.0 / qf).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1 - 1/q), got {delta}")));
    }
    if !(slack >= 0.0) {
        return Err(invalid(format!("slack must be nonnegative, got {slack}")));
    }
    let rate = 1.0 - q_ary_entropy(q, delta)? - slack;
    Ok((rate * n as f64).floor().max(0.0) as usize)
}

/// Smallest integer distance meeting relative distance `delta`.
pub(crate) fn required_distance(delta: f64, n: usize) -> usize {
    (delta * n as f64 - 1e-9).ceil().max(0.0) as usize
}

/// A random linear code meeting the Gilbert-Varshamov rate-distance
/// tradeoff (minus `slack`), found by seeded rejection sampling.
pub fn random_linear_code_gv(q: u32, n: usize, delta: f64, seed: u64, slack: f64) -> Result<GvSample> {
    if !is_prime(q) {
        return Err(invalid(format!("alphabet size {q} is not prime")));
    }
    let k = gv_dimension(q, n, delta, slack)?;
    if k < 1 {
        return Err(Error::ConstructionFailed {
            attempts: 0,
            reason: format!("target dimension is 0 for n={n}, delta={delta}, slack={slack}"),
        });
    }
    sample_linear_code(q, n, k, required_distance(delta, n), seed, false, GV_RETRY_BUDGET, &Caps::default())
}

/// Generator of the Reed-Solomon code of dimension `k` evaluated at every
/// point of `GF(q)`: row `j` holds `x^j` for `x = 0..q`.
pub fn reed_solomon_generator(q: u32, k: usize) -> Result<LinearCode> {
    if !is_prime(q) {
        return Err(invalid(format!("alphabet size {q} is not prime")));
    }
    if k < 1 || k > q as usize {
        return Err(invalid(format!("Reed-Solomon dimension must lie in [1, {q}], got {k}")));
    }
    let rows = (0..k as u64).map(|j| (0..q).map(|x| FieldElement::from_raw(x, q).pow(j).value()).collect()).collect();
    LinearCode::new(q, rows)
}

/// Evaluations of all polynomials of degree below `k` at all points of `GF(q)`.
pub fn reed_solomon(q: u32, k: usize, caps: &Caps) -> Result<Code> {
    enumerate_codewords(&reed_solomon_generator(q, k)?, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{is_balanced, min_distance};

    fn rows(c: &Code) -> Vec<Vec<u32>> {
        c.words().iter().map(|w| w.symbols().to_vec()).collect()
    }

    #[test]
    fn enumerate_examples() {
        let caps = Caps::default();
        let rep = LinearCode::new(2, vec![vec![1, 1, 1]]).unwrap();
        assert_eq!(rows(&enumerate_codewords(&rep, &caps).unwrap()), vec![vec![0, 0, 0], vec![1, 1, 1]]);
        let full = LinearCode::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(enumerate_codewords(&full, &caps).unwrap().len(), 4);
        let t = LinearCode::new(3, vec![vec![1, 2]]).unwrap();
        assert_eq!(rows(&enumerate_codewords(&t, &caps).unwrap()), vec![vec![0, 0], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn enumerate_respects_cap() {
        let lc = LinearCode::new(2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(matches!(enumerate_codewords(&lc, &Caps::uniform(7)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn linear_code_validation() {
        assert!(LinearCode::new(4, vec![vec![1, 1]]).is_err());
        assert!(LinearCode::new(2, vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(LinearCode::new(3, vec![vec![1, 3]]).is_err());
        assert!(LinearCode::new(2, vec![vec![1], vec![1]]).is_err());
    }

    #[test]
    fn gv_code_meets_distance() {
        let caps = Caps::default();
        let s = random_linear_code_gv(2, 20, 0.25, 7, 0.1).unwrap();
        let c = enumerate_codewords(&s.code, &caps).unwrap();
        let d = min_distance(&c, &caps).unwrap();
        assert!(d.absolute >= 5);
        assert!(s.code.dimension() >= 1);
        assert_eq!(d.absolute as usize, s.min_distance);

        // without slack the rate target gives dimension 3
        let s0 = random_linear_code_gv(2, 20, 0.25, 7, 0.0).unwrap();
        assert!(s0.code.dimension() >= 3);
        let c0 = enumerate_codewords(&s0.code, &caps).unwrap();
        assert!(min_distance(&c0, &caps).unwrap().absolute >= 5);
    }

    #[test]
    fn gv_is_deterministic() {
        let a = random_linear_code_gv(3, 12, 0.3, 42, 0.05).unwrap();
        let b = random_linear_code_gv(3, 12, 0.3, 42, 0.05).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gv_vacuous_distance_accepts_first_draw() {
        let s = random_linear_code_gv(2, 10, 0.0, 1, 0.0).unwrap();
        assert_eq!(s.code.dimension(), 10);
        // the first full-rank draw is accepted; rank failures are the only retries
        let s = random_linear_code_gv(2, 10, 0.0, 1, 0.5).unwrap();
        assert_eq!(s.code.dimension(), 5);
    }

    #[test]
    fn gv_failures() {
        assert!(matches!(random_linear_code_gv(2, 14, 0.5, 1, 0.0), Err(Error::Domain(_))));
        assert!(matches!(random_linear_code_gv(2, 14, 0.45, 1, 0.1), Err(Error::ConstructionFailed { .. })));
        assert!(matches!(
            sample_linear_code(2, 8, 4, 8, 3, false, 20, &Caps::default()),
            Err(Error::ConstructionFailed { attempts: 20, .. })
        ));
    }

    #[test]
    fn forced_ones_is_balanced() {
        let caps = Caps::default();
        let s = sample_linear_code(3, 9, 3, 4, 11, true, 200, &caps).unwrap();
        assert_eq!(s.code.generator_rows()[0], vec![1; 9]);
        assert!(is_balanced(&enumerate_codewords(&s.code, &caps).unwrap()));
    }

    #[test]
    fn reed_solomon_examples() {
        let caps = Caps::default();
        assert_eq!(rows(&reed_solomon(3, 1, &caps).unwrap()), vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]);
        let rs = reed_solomon(5, 2, &caps).unwrap();
        assert_eq!(rs.len(), 25);
        assert_eq!(min_distance(&rs, &caps).unwrap().absolute, 4);
        assert!(is_balanced(&rs));
        assert_eq!(reed_solomon(2, 2, &caps).unwrap().len(), 4);
        assert_eq!(min_distance(&reed_solomon(2, 2, &caps).unwrap(), &caps).unwrap().absolute, 1);
        assert!(reed_solomon(5, 6, &caps).is_err());
        assert!(reed_solomon(6, 2, &caps).is_err());
    }

    #[test]
    fn reed_solomon_distance_is_mds() {
        let caps = Caps::default();
        for q in [2u32, 3, 5, 7] {
            for k in 1..=(q as usize).min(3) {
                let rs = reed_solomon(q, k, &caps).unwrap();
                if rs.len() < 2 {
                    continue;
                }
                assert_eq!(min_distance(&rs, &caps).unwrap().absolute as usize, q as usize - k + 1);
                assert!(is_balanced(&rs));
            }
        }
    }
}
