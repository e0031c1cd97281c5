//! List-decoding radii and executable forms of the average-distance list
//! decoding lemmas, with every constant explicit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Word;
use crate::codes::{lwise_bias, lwise_distance, Code};
use crate::embeddings::binary_code_from_sph;
use crate::enumerate::{power, Caps};
use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;
use crate::props::{flat_bound_from_rip2, flat_rip_constant, rip2_constant};

/// Slack for comparing measured reals against exact thresholds.
const SLACK: f64 = 1e-9;
const CHUNK: u128 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListDecodingReport {
    pub rho: f64,
    /// Absolute ball radius `floor(rho n)`.
    pub radius: usize,
    pub max_list_size: usize,
    pub worst_center: Word,
    pub centers_checked: u128,
}

fn center_from_index(mut t: u128, q: u32, n: usize) -> Vec<u32> {
    let mut s = vec![0u32; n];
    for i in (0..n).rev() {
        s[i] = (t % q as u128) as u32;
        t /= q as u128;
    }
    s
}

/// Largest number of codewords in any Hamming ball of radius `floor(rho n)`,
/// over every center in `Z_q^n`. The worst center is the lexicographically
/// first one attaining the maximum.
pub fn list_size_at_radius(c: &Code, rho: f64, caps: &Caps) -> Result<ListDecodingReport> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::Domain(format!("rho must lie in [0, 1], got {rho}")));
    }
    let (q, n) = (c.alphabet_size(), c.block_length());
    let total = power(q, n);
    caps.check_centers("list-decoding centers", total)?;
    let radius = (rho * n as f64 + SLACK).floor() as usize;
    let chunks = total.div_ceil(CHUNK);
    let best: Vec<(usize, u128)> = if q == 2 && n <= 64 {
        let masks: Vec<u64> =
            c.words().iter().map(|w| w.symbols().iter().fold(0u64, |acc, &s| acc << 1 | s as u64)).collect();
        (0..chunks)
            .into_par_iter()
            .map(|k| {
                let mut best = (0usize, 0u128);
                for t in k * CHUNK..((k + 1) * CHUNK).min(total) {
                    let x = t as u64;
                    let count = masks.iter().filter(|&&m| ((m ^ x).count_ones() as usize) <= radius).count();
                    if count > best.0 {
                        best = (count, t);
                    }
                }
                best
            })
            .collect()
    } else {
        (0..chunks)
            .into_par_iter()
            .map(|k| {
                let start = k * CHUNK;
                let end = ((k + 1) * CHUNK).min(total);
                let mut x = center_from_index(start, q, n);
                let mut best = (0usize, start);
                for t in start..end {
                    let count = c
                        .words()
                        .iter()
                        .filter(|w| w.symbols().iter().zip(&x).filter(|(a, b)| a != b).count() <= radius)
                        .count();
                    if count > best.0 {
                        best = (count, t);
                    }
                    for i in (0..n).rev() {
                        x[i] += 1;
                        if x[i] < q {
                            break;
                        }
                        x[i] = 0;
                    }
                }
                best
            })
            .collect()
    };
    let (max_list_size, at) = best.into_iter().fold((0, 0), |acc, b| if b.0 > acc.0 { b } else { acc });
    Ok(ListDecodingReport {
        rho,
        radius,
        max_list_size,
        worst_center: Word::from_raw(q, center_from_index(at, q, n)),
        centers_checked: total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Premise held and so did the conclusion.
    Pass,
    /// Premise failed, so the implication holds trivially.
    Vacuous,
    /// Premise held but the conclusion failed.
    Fail,
    /// The premise cannot be evaluated on this code (too few codewords).
    NotApplicable,
}

impl Verdict {
    pub fn is_counterexample(self) -> bool {
        self == Verdict::Fail
    }
}

fn check_binary(c: &Code) -> Result<()> {
    if c.alphabet_size() != 2 {
        return Err(Error::Unsupported("list-decoding lemmas are stated for binary codes".into()));
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1/2], got {eps}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JohnsonReport {
    pub epsilon: f64,
    /// `floor(1/eps^2) + 1`.
    pub l_prime: usize,
    /// `1/2 - eps^2`.
    pub premise_threshold: f64,
    /// `dist_{l'}(C)`, absent when `l' > |C|`.
    pub premise_value: Option<f64>,
    pub premise_holds: Option<bool>,
    pub rho: f64,
    pub list_size: usize,
    /// `floor(1/eps^2)`.
    pub list_bound: usize,
    pub conclusion_holds: bool,
    pub verdict: Verdict,
}

/// If `dist_{l'}(C) >= 1/2 - eps^2` with `l' = floor(1/eps^2) + 1`, then
/// every ball of relative radius `1/2 - eps` holds at most `floor(1/eps^2)`
/// codewords.
///
/// When `l' > |C|` the conclusion holds trivially and the verdict is vacuous.
pub fn johnson_check(c: &Code, eps: f64, caps: &Caps) -> Result<JohnsonReport> {
    check_binary(c)?;
    check_epsilon(eps)?;
    let inv = 1.0 / (eps * eps);
    let list_bound = (inv + SLACK).floor() as usize;
    let l_prime = list_bound + 1;
    let premise_threshold = 0.5 - eps * eps;
    let premise_value = if l_prime <= c.len() { Some(lwise_distance(c, l_prime, caps)?.relative) } else { None };
    let premise_holds = premise_value.map(|v| v >= premise_threshold - 1e-12);
    let rho = 0.5 - eps;
    let list = list_size_at_radius(c, rho, caps)?;
    let conclusion_holds = list.max_list_size <= list_bound;
    let verdict = match premise_holds {
        Some(true) if conclusion_holds => Verdict::Pass,
        Some(true) => Verdict::Fail,
        _ => Verdict::Vacuous,
    };
    Ok(JohnsonReport {
        epsilon: eps,
        l_prime,
        premise_threshold,
        premise_value,
        premise_holds,
        rho,
        list_size: list.max_list_size,
        list_bound,
        conclusion_holds,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConverseReport {
    pub list_order: usize,
    pub epsilon: f64,
    /// `ceil(L / eps)`.
    pub l_prime: usize,
    pub rho: f64,
    pub list_size: usize,
    /// Whether `list_size < L`.
    pub premise_holds: bool,
    /// `1/2 - 2 eps`.
    pub conclusion_threshold: f64,
    pub conclusion_value: Option<f64>,
    pub conclusion_holds: Option<bool>,
    pub verdict: Verdict,
}

/// If every ball of relative radius `1/2 - eps` holds fewer than `L`
/// codewords, then `dist_{ceil(L/eps)}(C) >= 1/2 - 2 eps`.
pub fn converse_check(c: &Code, list_order: usize, eps: f64, caps: &Caps) -> Result<ConverseReport> {
    check_binary(c)?;
    check_epsilon(eps)?;
    if list_order < 1 {
        return Err(invalid("list order must be at least 1"));
    }
    let l_prime = (list_order as f64 / eps - SLACK).ceil() as usize;
    let rho = 0.5 - eps;
    let conclusion_threshold = 0.5 - 2.0 * eps;
    let list = list_size_at_radius(c, rho, caps)?;
    let premise_holds = list.max_list_size < list_order;
    let mut report = ConverseReport {
        list_order,
        epsilon: eps,
        l_prime,
        rho,
        list_size: list.max_list_size,
        premise_holds,
        conclusion_threshold,
        conclusion_value: None,
        conclusion_holds: None,
        verdict: Verdict::NotApplicable,
    };
    if l_prime < 2 || l_prime > c.len() {
        return Ok(report);
    }
    let value = lwise_distance(c, l_prime, caps)?.relative;
    let holds = value >= conclusion_threshold - 1e-12;
    report.conclusion_value = Some(value);
    report.conclusion_holds = Some(holds);
    report.verdict = match (premise_holds, holds) {
        (false, _) => Verdict::Vacuous,
        (true, true) => Verdict::Pass,
        (true, false) => Verdict::Fail,
    };
    Ok(report)
}

/// Bound on `|dist_l - 1/2|` implied by flat RIP with constant `alpha_flat`
/// at order `l0`, for unit columns with `+-1/sqrt(n)` entries.
///
/// For even `l <= 2 l0`, averaging the flat bound over all balanced splits
/// of an `l`-set counts each pair `2 C(l-2, l/2-1)` times, giving
/// `|sum_{i<j} <u_i, u_j>| <= alpha_flat (l-1)` and so `alpha_flat / l`.
/// Odd `l` averages the even case over the omitted element, giving
/// `alpha_flat / (l-1)` whenever `(l-1)/2 <= l0`.
pub fn lwise_bias_bound_from_flat(alpha_flat: f64, l0: usize, l: usize) -> Option<f64> {
    if l < 2 {
        return None;
    }
    if l.is_multiple_of(2) && l <= 2 * l0 {
        Some(alpha_flat / l as f64)
    } else if l % 2 == 1 && (l - 1) / 2 <= l0 && l >= 3 {
        Some(alpha_flat / (l - 1) as f64)
    } else {
        None
    }
}

/// Flat-RIP constant at order `l0` implied by measured L-wise biases: if
/// `l * lwise_bias(C, l) <= alpha` for every `2 <= l <= 2 l0`, the
/// spherical embedding has flat constant at most `4 alpha`.
pub fn flat_bound_from_lwise_bias(c: &Code, l0: usize, caps: &Caps) -> Result<(f64, f64)> {
    let mut alpha: f64 = 0.0;
    for l in 2..=(2 * l0).min(c.len()) {
        alpha = alpha.max(l as f64 * lwise_bias(c, l, caps)?.bias);
    }
    Ok((alpha, 4.0 * alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasStage {
    pub order: usize,
    pub measured: f64,
    pub predicted: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RipListReport {
    pub order: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub code_size: usize,
    pub block_length: usize,
    pub rip2_measured: f64,
    /// Whether the matrix actually has RIP-2 constant `alpha` at `order`.
    pub hypothesis_met: bool,
    pub flat_order: usize,
    pub flat_measured: f64,
    pub flat_predicted: f64,
    pub flat_within: bool,
    pub bias: Vec<BiasStage>,
    /// `sqrt(flat_predicted / (2 flat_order))`: smallest epsilon for which
    /// the predicted biases certify the list-decoding premise.
    pub epsilon0: f64,
    /// Whether the predicted biases imply `dist_{l'} >= 1/2 - eps^2`.
    pub premise_predicted: bool,
    pub l_prime: usize,
    pub rho: f64,
    pub list_size: usize,
    pub list_bound: usize,
    pub list_within: bool,
    pub verdict: Verdict,
}

/// Runs the chain RIP-2 -> flat RIP -> L-wise bias -> list decoding on a
/// `+-1/sqrt(n)` matrix, reporting each measured constant beside the bound
/// predicted from `alpha`.
///
/// The verdict is vacuous when the matrix does not have RIP-2 constant
/// `alpha` at `order`; otherwise it fails iff some measured value exceeds its
/// prediction. For `eps < epsilon0` the list-size stage is not predicted and
/// only reported.
pub fn rip_to_listdecoding_report(
    m: &ComplexMatrix,
    order: usize,
    alpha: f64,
    eps: f64,
    caps: &Caps,
) -> Result<RipListReport> {
    if order < 2 {
        return Err(invalid("order must be at least 2"));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be finite and nonnegative, got {alpha}")));
    }
    check_epsilon(eps)?;
    let code = binary_code_from_sph(m)?;
    if code.len() < 2 {
        return Err(invalid("need at least two columns"));
    }
    if order > code.len() {
        return Err(invalid(format!("order {order} exceeds {} columns", code.len())));
    }
    let rip2_measured = rip2_constant(m, order, caps)?.constant;
    let hypothesis_met = rip2_measured <= alpha + SLACK;

    let flat_order = order / 2;
    let flat_measured = flat_rip_constant(m, flat_order, caps)?.constant;
    let flat_predicted = flat_bound_from_rip2(alpha, flat_order);
    let flat_within = flat_measured <= flat_predicted + SLACK;

    let mut bias = Vec::new();
    for l in 2..=(2 * flat_order).min(code.len()) {
        let predicted = lwise_bias_bound_from_flat(flat_predicted, flat_order, l).expect("l <= 2 l0");
        let measured = lwise_bias(&code, l, caps)?.bias;
        bias.push(BiasStage { order: l, measured, predicted, within: measured <= predicted + SLACK });
    }

    let list_bound = (1.0 / (eps * eps) + SLACK).floor() as usize;
    let l_prime = list_bound + 1;
    // dist_{l'} >= dist_l for l <= l', so any predicted bias at such l helps
    let best_bias = (2..=l_prime.min(2 * flat_order + 1))
        .filter_map(|l| lwise_bias_bound_from_flat(flat_predicted, flat_order, l))
        .fold(f64::INFINITY, f64::min);
    let premise_predicted = l_prime > code.len() || best_bias <= eps * eps + 1e-12;
    let epsilon0 = (flat_predicted / (2 * flat_order) as f64).sqrt();
    let rho = 0.5 - eps;
    let list_size = list_size_at_radius(&code, rho, caps)?.max_list_size;
    let list_within = list_size <= list_bound;

    let verdict = if !hypothesis_met {
        Verdict::Vacuous
    } else if !flat_within || bias.iter().any(|b| !b.within) || (premise_predicted && !list_within) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(RipListReport {
        order,
        alpha,
        epsilon: eps,
        code_size: code.len(),
        block_length: code.block_length(),
        rip2_measured,
        hypothesis_met,
        flat_order,
        flat_measured,
        flat_predicted,
        flat_within,
        bias,
        epsilon0,
        premise_predicted,
        l_prime,
        rho,
        list_size,
        list_bound,
        list_within,
        verdict,
    })
}
