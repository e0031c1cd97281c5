//! Shared fixtures for the benchmarks.

use sparsecode::codes::{enumerate_codewords, sample_linear_code, GV_RETRY_BUDGET};
use sparsecode::embeddings::sph_code;
use sparsecode::group_testing::kautz_singleton;
use sparsecode::recovery::{unit_circle_nodes, vandermonde_matrix};
use sparsecode::{BinaryMatrix, Caps, Code, Complex64, ComplexMatrix};

/// `[n, k]` binary linear code with minimum distance at least `d`, fixed seed.
pub fn binary_linear_code(n: usize, k: usize, d: usize) -> Code {
    let caps = Caps::default();
    let sample =
        sample_linear_code(2, n, k, d, 17, false, GV_RETRY_BUDGET, &caps).expect("fixture parameters are feasible");
    enumerate_codewords(&sample.code, &caps).expect("small code")
}

pub fn spherical_matrix(n: usize, k: usize, d: usize) -> ComplexMatrix {
    sph_code(&binary_linear_code(n, k, d))
}

pub fn kautz_singleton_matrix(q: u32, k: usize) -> BinaryMatrix {
    kautz_singleton(q, k, &Caps::default()).expect("prime q").matrix
}

pub fn vandermonde(rows: usize, cols: usize) -> ComplexMatrix {
    vandermonde_matrix(&unit_circle_nodes(cols), rows).expect("distinct nodes")
}

/// Measurements of the vector with `value` at each of `support`.
pub fn sparse_measurement(m: &ComplexMatrix, support: &[usize], value: Complex64) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); m.cols()];
    for &j in support {
        x[j] = value;
    }
    m.mul_vec(&x).expect("matching length")
}
