//! Small dense eigen, singular-value and least-squares routines.
//!
//! Everything is built on cyclic Jacobi rotations. Complex Hermitian inputs
//! go through the real embedding `[[A, -B], [B, A]]` of `A + iB`, whose
//! spectrum is that of the original with every eigenvalue doubled.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a real symmetric `n x n` row-major matrix.
///
/// Returns eigenvalues in ascending order and, if requested, the matching
/// eigenvectors as columns of a row-major `n x n` matrix.
pub fn symmetric_eigen(a: &[f64], n: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    if a.len() != n * n {
        return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", a.len())));
    }
    let mut a = a.to_vec();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let mut converged = off_diagonal_norm(&a, n) <= JACOBI_TOLERANCE * scale;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a, n) <= JACOBI_TOLERANCE * scale;
    }
    if !converged {
        return Err(Error::Domain(format!("Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| {
        let mut out = vec![0.0; n * n];
        for (new, &old) in order.iter().enumerate() {
            for k in 0..n {
                out[k * n + new] = v[k * n + old];
            }
        }
        out
    });
    Ok((values, vectors))
}

/// Real embedding of a Hermitian row-major matrix, `2n x 2n`.
fn real_embedding(h: &[Complex64], n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut r = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            r[i * m + j] = z.re;
            r[(i + n) * m + j + n] = z.re;
            r[i * m + j + n] = -z.im;
            r[(i + n) * m + j] = z.im;
        }
    }
    r
}

/// Eigenvalues of a Hermitian row-major matrix, ascending.
pub fn hermitian_eigenvalues(h: &[Complex64], n: usize) -> Result<Vec<f64>> {
    if h.len() != n * n {
        return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", h.len())));
    }
    if h.iter().all(|z| z.im == 0.0) {
        let re: Vec<f64> = h.iter().map(|z| z.re).collect();
        return Ok(symmetric_eigen(&re, n, false)?.0);
    }
    let (vals, _) = symmetric_eigen(&real_embedding(h, n), 2 * n, false)?;
    Ok(vals.into_iter().step_by(2).collect())
}

/// Hermitian eigen-decomposition: ascending eigenvalues with unit eigenvectors.
pub fn hermitian_eigen(h: &[Complex64], n: usize) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    if h.len() != n * n {
        return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", h.len())));
    }
    if h.iter().all(|z| z.im == 0.0) {
        let re: Vec<f64> = h.iter().map(|z| z.re).collect();
        let (vals, vecs) = symmetric_eigen(&re, n, true)?;
        let vecs = vecs.expect("requested");
        let cols = (0..n).map(|c| (0..n).map(|k| Complex64::new(vecs[k * n + c], 0.0)).collect()).collect();
        return Ok((vals, cols));
    }
    let m = 2 * n;
    let (vals, vecs) = symmetric_eigen(&real_embedding(h, n), m, true)?;
    let vecs = vecs.expect("requested");
    // Each eigenspace of the embedding is the realification of a complex one,
    // so it holds both z and i*z. Keep a vector only if it is far from the
    // complex span of those already kept; for multiplicity m some vector
    // always has squared residual at least 1/m, and m <= n <= 1/0.04.
    let mut out_vals = Vec::with_capacity(n);
    let mut out_vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..m {
        if out_vecs.len() == n {
            break;
        }
        let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::new(vecs[k * m + c], vecs[(k + n) * m + c])).collect();
        for u in &out_vecs {
            let proj: Complex64 = u.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
            for (zi, ui) in z.iter_mut().zip(u) {
                *zi -= proj * ui;
            }
        }
        let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm * norm < 0.04 {
            continue;
        }
        out_vals.push(vals[c]);
        out_vecs.push(z.into_iter().map(|x| x / norm).collect());
    }
    if out_vecs.len() != n {
        return Err(Error::Domain("could not separate complex eigenvectors".into()));
    }
    Ok((out_vals, out_vecs))
}

/// Extreme singular values `(sigma_min, sigma_max)` from a Gram matrix.
pub fn extreme_singular_values_from_gram(gram: &[Complex64], k: usize) -> Result<(f64, f64)> {
    let vals = hermitian_eigenvalues(gram, k)?;
    let lo = vals.first().copied().unwrap_or(0.0).max(0.0).sqrt();
    let hi = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    Ok((lo, hi))
}

/// Singular values of a complex `rows x cols` matrix given column-major,
/// by one-sided Jacobi on its real embedding. Unlike the Gram route this keeps
/// small singular values accurate to roughly machine precision times the
/// largest one, which matters for rank decisions.
///
/// Returns ascending singular values and the right singular vector of the
/// smallest one.
pub fn singular_values(cols_data: &[Complex64], rows: usize, cols: usize) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if cols_data.len() != rows * cols || cols == 0 {
        return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", cols_data.len())));
    }
    // Real embedding [[Re, -Im], [Im, Re]], stored column-major.
    let (m, k) = (2 * rows, 2 * cols);
    let mut a = vec![0.0; m * k];
    for j in 0..cols {
        for i in 0..rows {
            let z = cols_data[j * rows + i];
            a[j * m + i] = z.re;
            a[j * m + i + rows] = z.im;
            a[(j + cols) * m + i] = -z.im;
            a[(j + cols) * m + i + rows] = z.re;
        }
    }
    let mut v = vec![0.0; k * k];
    for i in 0..k {
        v[i * k + i] = 1.0;
    }
    // Columns below this squared norm are numerically zero and never rotated.
    let frob2: f64 = a.iter().map(|x| x * x).sum();
    let negligible = f64::EPSILON * f64::EPSILON * frob2;
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let x = a[p * m + i];
                    let y = a[q * m + i];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if alpha <= negligible || beta <= negligible || gamma.abs() <= JACOBI_TOLERANCE * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let x = a[p * m + i];
                    let y = a[q * m + i];
                    a[p * m + i] = c * x - s * y;
                    a[q * m + i] = s * x + c * y;
                }
                for i in 0..k {
                    let x = v[p * k + i];
                    let y = v[q * k + i];
                    v[p * k + i] = c * x - s * y;
                    v[q * k + i] = s * x + c * y;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::Domain(format!("one-sided Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
        }
    }
    let norms: Vec<f64> = (0..k).map(|c| a[c * m..(c + 1) * m].iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[x].total_cmp(&norms[y]));
    let sorted: Vec<f64> = order.iter().map(|&c| norms[c]).collect();
    let vals = sorted.into_iter().step_by(2).collect();
    let best = order[0];
    let vec = &v[best * k..(best + 1) * k];
    let z: Vec<Complex64> = (0..cols).map(|i| Complex64::new(vec[i], vec[i + cols])).collect();
    let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    Ok((vals, z.into_iter().map(|x| x / norm).collect()))
}

/// Least-squares solution of `A x = y` for `A` given column-major, via the
/// normal equations and an eigen pseudo-inverse. Returns `(x, ||A x - y||)`.
pub fn least_squares(
    cols_data: &[Complex64],
    rows: usize,
    cols: usize,
    y: &[Complex64],
) -> Result<(Vec<Complex64>, f64)> {
    if cols_data.len() != rows * cols || y.len() != rows {
        return Err(Error::Dimension("least-squares operands disagree".into()));
    }
    let col = |j: usize| &cols_data[j * rows..(j + 1) * rows];
    let mut gram = vec![Complex64::new(0.0, 0.0); cols * cols];
    for a in 0..cols {
        for b in a..cols {
            // (A^H A)[a][b] = <col b, col a>
            let v: Complex64 = col(a).iter().zip(col(b)).map(|(x, z)| x.conj() * z).sum();
            gram[a * cols + b] = v;
            gram[b * cols + a] = v.conj();
        }
    }
    let rhs: Vec<Complex64> = (0..cols).map(|a| col(a).iter().zip(y).map(|(x, z)| x.conj() * z).sum()).collect();
    // Solve the real embedding of the normal equations with a pseudo-inverse.
    let m = 2 * cols;
    let (vals, vecs) = symmetric_eigen(&real_embedding(&gram, cols), m, true)?;
    let vecs = vecs.expect("requested");
    let b: Vec<f64> = rhs.iter().map(|z| z.re).chain(rhs.iter().map(|z| z.im)).collect();
    let top = vals.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = top * 1e-12;
    let mut sol = vec![0.0; m];
    for (c, &lambda) in vals.iter().enumerate() {
        if lambda <= cutoff || lambda <= 0.0 {
            continue;
        }
        let coeff = (0..m).map(|k| vecs[k * m + c] * b[k]).sum::<f64>() / lambda;
        for k in 0..m {
            sol[k] += coeff * vecs[k * m + c];
        }
    }
    let x: Vec<Complex64> = (0..cols).map(|k| Complex64::new(sol[k], sol[k + cols])).collect();
    let mut resid = 0.0;
    for i in 0..rows {
        let mut ax = Complex64::new(0.0, 0.0);
        for (j, xj) in x.iter().enumerate() {
            ax += cols_data[j * rows + i] * xj;
        }
        resid += (ax - y[i]).norm_sqr();
    }
    Ok((x, resid.sqrt()))
}
