//! Closed-form rate, coherence and row-count bounds.
//!
//! Asymptotic expressions are evaluated with every hidden constant set to 1
//! and are labelled "indicators": they are planning aids, never certificates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

fn log_q(x: f64, q: u32) -> f64 {
    if q == 2 {
        x.log2()
    } else {
        x.ln() / (q as f64).ln()
    }
}

/// The q-ary entropy function, with `0 log 0 = 0`.
pub fn q_ary_entropy(q: u32, delta: f64) -> Result<f64> {
    if q < 2 {
        return Err(invalid(format!("alphabet size must be at least 2, got {q}")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1], got {delta}")));
    }
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * log_q(x, q) };
    let mut h = -xlogx(delta) - xlogx(1.0 - delta);
    if q > 2 {
        h += delta * log_q((q - 1) as f64, q);
    }
    Ok(h)
}

/// `1 - h_q(delta)`, the Gilbert-Varshamov rate without its o(1) term.
pub fn gv_rate(q: u32, delta: f64) -> Result<f64> {
    let qf = q as f64;
    if !(0.0..1.0 - 1.0 / qf).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1 - 1/q), got {delta}")));
    }
    Ok(1.0 - q_ary_entropy(q, delta)?)
}

/// Two-term expansion of the GV rate at `delta = 1 - (1 + epsilon)/q`:
/// `e^2 / (2 (q-1) ln q) - e^3 (q-2) / (6 (q-1)^2 ln q)`.
///
/// The cubic coefficient is negative; the remainder is O(e^4).
pub fn gv_critical_expansion(q: u32, epsilon: f64) -> Result<f64> {
    if q < 2 {
        return Err(invalid(format!("alphabet size must be at least 2, got {q}")));
    }
    let qm1 = (q - 1) as f64;
    let lnq = (q as f64).ln();
    let e2 = epsilon * epsilon;
    Ok(e2 / (2.0 * qm1 * lnq) - e2 * epsilon * (q as f64 - 2.0) / (6.0 * qm1 * qm1 * lnq))
}

/// MRRW linear-programming upper bound on the rate at relative distance `delta`.
pub fn mrrw_rate_bound(q: u32, delta: f64) -> Result<f64> {
    let qf = q as f64;
    if q < 2 {
        return Err(invalid(format!("alphabet size must be at least 2, got {q}")));
    }
    if !(0.0..=1.0 - 1.0 / qf + 1e-12).contains(&delta) {
        return Err(Error::Domain(format!("delta must lie in [0, 1 - 1/q], got {delta}")));
    }
    let d = delta.min(1.0 - 1.0 / qf);
    let mut arg = (qf - 1.0 - (qf - 2.0) * d - 2.0 * ((qf - 1.0) * d * (1.0 - d)).sqrt()) / qf;
    if arg < 0.0 && arg > -1e-12 {
        arg = 0.0;
    }
    if !(0.0..=1.0).contains(&arg) {
        return Err(Error::Domain(format!("entropy argument {arg} outside [0, 1]")));
    }
    q_ary_entropy(q, arg)
}

/// `ln N / (n ln(n / ln N))`: the order of the smallest squared coherence any
/// N-point spherical code in dimension n can have (no constant claimed).
pub fn coherence_lower_indicator(n: f64, big_n: f64) -> Result<f64> {
    if !(n >= 2.0 && big_n > n) {
        return Err(invalid(format!("need N > n >= 2, got n={n}, N={big_n}")));
    }
    let ln_n = big_n.ln();
    if !(ln_n < n) {
        return Err(invalid(format!("need ln N < n, got ln N={ln_n}, n={n}")));
    }
    Ok(ln_n / (n * (n / ln_n).ln()))
}

/// Parameters for [`row_bound_indicators`]. `q` and `alpha` are only needed
/// for the spherical-embedding row count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowBoundQuery {
    pub sparsity: u64,
    pub columns: u64,
    pub r: u64,
    pub n_prime: u64,
    pub q: Option<u64>,
    pub alpha: Option<f64>,
}

/// Row-count indicators side by side, constants set to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowBoundIndicators {
    /// `n'^2 N^{1/r} / r`: rows for which an (n, n', r)-design of size N exists.
    pub design_existence: f64,
    /// `L^2 log_L N`: fewer rows than this admit no L-disjunct matrix.
    pub disjunct_lower: f64,
    /// `L^2 ln N`: rows achieved by random L-disjunct matrices.
    pub disjunct_upper: f64,
    /// `L^2 ln N q / alpha^2`: rows of a spherical-embedding RIP matrix.
    pub spherical_rip_rows: Option<f64>,
}

pub fn row_bound_indicators(query: &RowBoundQuery) -> Result<RowBoundIndicators> {
    let RowBoundQuery { sparsity, columns, r, n_prime, q, alpha } = *query;
    if sparsity < 2 || columns < 1 || r < 1 || n_prime < 1 {
        return Err(invalid("need L >= 2 and positive N, r, n'"));
    }
    let l = sparsity as f64;
    let big_n = columns as f64;
    let np = n_prime as f64;
    let rf = r as f64;
    let spherical_rip_rows = match (q, alpha) {
        (Some(q), Some(a)) if a > 0.0 => Some(l * l * big_n.ln() * q as f64 / (a * a)),
        (None, None) => None,
        _ => return Err(invalid("spherical row count needs both q and a positive alpha")),
    };
    Ok(RowBoundIndicators {
        design_existence: np * np * big_n.powf(1.0 / rf) / rf,
        disjunct_lower: l * l * big_n.ln() / l.ln(),
        disjunct_upper: l * l * big_n.ln(),
        spherical_rip_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference entropy written out term by term with natural logs.
    fn entropy_oracle(q: f64, d: f64) -> f64 {
        let mut h = 0.0;
        if d > 0.0 {
            h += d * (q - 1.0).ln() - d * d.ln();
        }
        if d < 1.0 {
            h -= (1.0 - d) * (1.0 - d).ln();
        }
        h / q.ln()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(q_ary_entropy(2, 0.5).unwrap(), 1.0);
        for q in [2u32, 3, 4, 5, 7] {
            let top = 1.0 - 1.0 / q as f64;
            assert!((q_ary_entropy(q, top).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(q_ary_entropy(q, 0.0).unwrap(), 0.0);
            let one = q_ary_entropy(q, 1.0).unwrap();
            assert!((one - ((q - 1) as f64).ln() / (q as f64).ln()).abs() < 1e-12);
        }
        assert!((q_ary_entropy(2, 0.11).unwrap() - 0.499_915_958_164_528).abs() < 1e-12);
        assert!(q_ary_entropy(2, 1.5).is_err());
    }

    #[test]
    fn entropy_matches_oracle() {
        for q in [2u32, 3, 5, 8] {
            for i in 0..=200 {
                let d = i as f64 / 200.0;
                assert!((q_ary_entropy(q, d).unwrap() - entropy_oracle(q as f64, d)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn entropy_is_concave_below_top() {
        for q in [2u32, 3, 5] {
            let top = 1.0 - 1.0 / q as f64;
            for i in 0..100 {
                for j in i + 1..=100 {
                    let a = top * i as f64 / 100.0;
                    let b = top * j as f64 / 100.0;
                    let mid = q_ary_entropy(q, 0.5 * (a + b)).unwrap();
                    let chord = 0.5 * (q_ary_entropy(q, a).unwrap() + q_ary_entropy(q, b).unwrap());
                    assert!(mid >= chord - 1e-12);
                }
            }
        }
    }

    #[test]
    fn gv_rate_examples() {
        assert_eq!(gv_rate(2, 0.0).unwrap(), 1.0);
        assert!((gv_rate(2, 0.11).unwrap() - 0.5).abs() < 1e-3);
        assert!(gv_rate(2, 0.499_999).unwrap() < 1e-9);
        assert!(gv_rate(2, 0.5).is_err());
        assert!(gv_rate(3, 0.7).is_err());
    }

    #[test]
    fn expansion_examples() {
        let e = 0.07;
        assert_eq!(gv_critical_expansion(2, e).unwrap(), e * e / (2.0 * 2f64.ln()));
        assert_eq!(gv_critical_expansion(5, 0.0).unwrap(), 0.0);
        for q in [2u32, 3, 5] {
            for e in [0.1, 0.05, 0.02] {
                let exact = 1.0 - q_ary_entropy(q, 1.0 - (1.0 + e) / q as f64).unwrap();
                assert!((exact - gv_critical_expansion(q, e).unwrap()).abs() <= e.powi(4));
            }
        }
    }

    #[test]
    fn mrrw_examples() {
        assert!(mrrw_rate_bound(2, 0.5).unwrap().abs() < 1e-12);
        assert_eq!(mrrw_rate_bound(2, 0.0).unwrap(), 1.0);
        let m = mrrw_rate_bound(2, 0.11).unwrap();
        let g = gv_rate(2, 0.11).unwrap();
        assert!(g < m && m < 1.0);
        assert!(mrrw_rate_bound(2, 0.6).is_err());
    }

    #[test]
    fn gv_never_exceeds_mrrw() {
        for q in [2u32, 3, 4, 5, 7, 11] {
            let top = 1.0 - 1.0 / q as f64;
            for i in 0..200 {
                let d = top * i as f64 / 200.0;
                assert!(gv_rate(q, d).unwrap() <= mrrw_rate_bound(q, d).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn coherence_indicator_examples() {
        let v = coherence_lower_indicator(1e3, 1e6).unwrap();
        assert!((v - 3.2264e-3).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for n in [100.0, 200.0, 400.0, 800.0] {
            let x = coherence_lower_indicator(n, 1e6).unwrap();
            assert!(x.is_finite() && x > 0.0 && x < prev);
            prev = x;
        }
        assert!(coherence_lower_indicator(10.0, 5.0).is_err());
        assert!(coherence_lower_indicator(10.0, 1e6).is_err());
    }

    #[test]
    fn row_indicators() {
        let q = RowBoundQuery { sparsity: 2, columns: 25, r: 5, n_prime: 5, q: None, alpha: None };
        let r = row_bound_indicators(&q).unwrap();
        assert!((r.disjunct_upper - 12.875_503).abs() < 1e-5);
        assert!((r.design_existence - 25.0 * 25f64.powf(0.2) / 5.0).abs() < 1e-12);
        assert!(r.spherical_rip_rows.is_none());
        let doubled = row_bound_indicators(&RowBoundQuery { columns: 50, ..q }).unwrap();
        assert!((doubled.disjunct_upper - r.disjunct_upper - 4.0 * 2f64.ln()).abs() < 1e-12);
        let with_q = RowBoundQuery { q: Some(3), alpha: Some(0.5), ..q };
        assert!(row_bound_indicators(&with_q).unwrap().spherical_rip_rows.is_some());
        assert!(row_bound_indicators(&RowBoundQuery { q: Some(3), ..q }).is_err());
    }
}
