//! Exact sparse recovery at desk scale: Vandermonde measurements,
//! exhaustive-support decoding and uniqueness certificates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embeddings::root_of_unity;
use crate::enumerate::{binomial, par_partitions, Caps, Combinations};
use crate::error::{dim, invalid, Result};
use crate::linalg::least_squares;
use crate::matrix::ComplexMatrix;
use crate::props::{kernel_injectivity, KernelReport};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const MIN_NODE_GAP: f64 = 1e-9;

/// `M[i][j] = nodes[j]^i` for `i < rows`.
pub fn vandermonde_matrix(nodes: &[Complex64], rows: usize) -> Result<ComplexMatrix> {
    if nodes.is_empty() || rows == 0 {
        return Err(invalid("need at least one node and one row"));
    }
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            if (nodes[a] - nodes[b]).norm() <= MIN_NODE_GAP {
                return Err(invalid(format!("nodes {a} and {b} coincide")));
            }
        }
    }
    ComplexMatrix::from_fn(rows, nodes.len(), |i, j| nodes[j].powu(i as u32))
}

/// The `N`-th roots of unity, `exp(2 pi i j / N)`.
pub fn unit_circle_nodes(count: usize) -> Vec<Complex64> {
    (0..count as u32).map(|j| root_of_unity(j, count as u32)).collect()
}

pub fn cs_encode(m: &ComplexMatrix, x: &[Complex64]) -> Result<Vec<Complex64>> {
    m.mul_vec(x)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub recovered: bool,
    /// Dense estimate as `[re, im]` pairs; all zero when nothing was found.
    pub estimate: Vec<[f64; 2]>,
    pub support: Vec<usize>,
    pub residual_norm: f64,
    pub candidates_tried: u128,
}

impl RecoveryResult {
    pub fn estimate_complex(&self) -> Vec<Complex64> {
        self.estimate.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }
}

/// Tries supports of size `0..=l` in order of size, then lexicographically,
/// and accepts the first whose least-squares residual is at most
/// `tol (1 + |y|)`.
pub fn cs_decode_exhaustive(
    m: &ComplexMatrix,
    y: &[Complex64],
    l: usize,
    tol: f64,
    caps: &Caps,
) -> Result<RecoveryResult> {
    let (rows, n) = (m.rows(), m.cols());
    if y.len() != rows {
        return Err(dim(format!("measurement of length {} for {rows} rows", y.len())));
    }
    if l > n {
        return Err(invalid(format!("sparsity {l} exceeds {n} columns")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let total: u128 = (0..=l).map(|s| binomial(n, s)).fold(0, u128::saturating_add);
    caps.check_subsets("candidate supports", total)?;
    let threshold = tol * (1.0 + norm(y));
    let ynorm = norm(y);
    if ynorm <= threshold {
        return Ok(RecoveryResult {
            recovered: true,
            estimate: vec![[0.0, 0.0]; n],
            support: Vec::new(),
            residual_norm: ynorm,
            candidates_tried: 1,
        });
    }
    let mut tried: u128 = 1;
    for s in 1..=l {
        type Hit = (Vec<usize>, Vec<Complex64>, f64);
        let parts: Vec<Result<(Option<Hit>, u128)>> = par_partitions(n, s, |mut combos| {
            let mut count = 0u128;
            let mut data = Vec::with_capacity(rows * s);
            while let Some((idx, _)) = combos.next_combo() {
                count += 1;
                data.clear();
                for &j in idx {
                    data.extend_from_slice(m.column(j));
                }
                let (coef, resid) = least_squares(&data, rows, s, y)?;
                if resid <= threshold {
                    return Ok((Some((idx.to_vec(), coef, resid)), count));
                }
            }
            Ok((None, count))
        });
        for p in parts {
            let (hit, count) = p?;
            tried += count;
            if let Some((support, coef, resid)) = hit {
                let mut estimate = vec![[0.0, 0.0]; n];
                for (&j, z) in support.iter().zip(&coef) {
                    estimate[j] = [z.re, z.im];
                }
                return Ok(RecoveryResult {
                    recovered: true,
                    estimate,
                    support,
                    residual_norm: resid,
                    candidates_tried: tried,
                });
            }
        }
    }
    Ok(RecoveryResult {
        recovered: false,
        estimate: vec![[0.0, 0.0]; n],
        support: Vec::new(),
        residual_norm: ynorm,
        candidates_tried: tried,
    })
}

/// Two distinct sparse vectors with (numerically) equal measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Collision {
    pub first: Vec<[f64; 2]>,
    pub second: Vec<[f64; 2]>,
    /// `|M first - M second|`.
    pub measurement_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub order: usize,
    pub unique: bool,
    pub kernel: KernelReport,
    pub collision: Option<Collision>,
}

/// Every `l`-sparse vector is determined by its measurements iff every
/// `2l` columns are independent. On failure the kernel vector is split into
/// two `l`-sparse vectors that collide.
pub fn uniqueness_certificate(m: &ComplexMatrix, l: usize, caps: &Caps) -> Result<UniquenessReport> {
    let kernel = kernel_injectivity(m, l, caps)?;
    let collision = if kernel.injective {
        None
    } else {
        let n = m.cols();
        let mut first = vec![Complex64::new(0.0, 0.0); n];
        let mut second = vec![Complex64::new(0.0, 0.0); n];
        for (pos, (&j, v)) in kernel.witness.iter().zip(&kernel.kernel_vector).enumerate() {
            let z = Complex64::new(v[0], v[1]);
            if pos < l {
                first[j] = z;
            } else {
                second[j] = -z;
            }
        }
        let a = m.mul_vec(&first)?;
        let b = m.mul_vec(&second)?;
        let gap = norm(&a.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>());
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
        Some(Collision { first: pairs(&first), second: pairs(&second), measurement_gap: gap })
    };
    Ok(UniquenessReport { order: l, unique: kernel.injective, kernel, collision })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsRoundtripReport {
    pub sparsity: usize,
    pub supports_checked: u128,
    pub draws_per_support: usize,
    pub trials: u64,
    pub failures: u64,
    pub max_error: f64,
    pub first_failure: Option<Vec<usize>>,
}

/// Largest per-entry error tolerated in a round trip.
pub const ROUNDTRIP_ERROR: f64 = 1e-6;

fn random_value(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() >= 0.1 {
            return z;
        }
    }
}

/// Encodes and decodes every support of size at most `l`, with `draws`
/// seeded random values per support.
pub fn cs_roundtrip(m: &ComplexMatrix, l: usize, seed: u64, draws: usize, caps: &Caps) -> Result<CsRoundtripReport> {
    let n = m.cols();
    if l > n {
        return Err(invalid(format!("sparsity {l} exceeds {n} columns")));
    }
    let supports: u128 = (0..=l).map(|s| binomial(n, s)).fold(0, u128::saturating_add);
    caps.check_subsets("round-trip supports", supports.saturating_mul(draws as u128))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CsRoundtripReport {
        sparsity: l,
        supports_checked: supports,
        draws_per_support: draws,
        trials: 0,
        failures: 0,
        max_error: 0.0,
        first_failure: None,
    };
    for s in 0..=l {
        let mut combos = Combinations::new(n, s);
        while let Some((support, _)) = combos.next_combo() {
            for _ in 0..draws {
                let mut x = vec![Complex64::new(0.0, 0.0); n];
                for &j in support {
                    x[j] = random_value(&mut rng);
                }
                let y = cs_encode(m, &x)?;
                let r = cs_decode_exhaustive(m, &y, l, DEFAULT_TOLERANCE, caps)?;
                let err = r.estimate_complex().iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                report.trials += 1;
                report.max_error = report.max_error.max(err);
                if !r.recovered || err > ROUNDTRIP_ERROR {
                    report.failures += 1;
                    report.first_failure.get_or_insert_with(|| support.to_vec());
                }
            }
        }
    }
    Ok(report)
}
