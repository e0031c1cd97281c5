//! Acceptance criteria, one line of output per criterion.
//!
//! Runs as a plain binary (no libtest harness) so the PASS/FAIL lines are
//! always printed. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;

use sparsecode::bounds::{gv_critical_expansion, gv_rate, mrrw_rate_bound, q_ary_entropy};
use sparsecode::codes::{
    code_bias, enumerate_codewords, lwise_bias, lwise_distance, min_distance, quotient_by_ones, sample_linear_code,
    GV_RETRY_BUDGET,
};
use sparsecode::corpus::{random_balanced_code, random_code, random_code_with_distance};
use sparsecode::embeddings::{bool_code, bool_word, sph_code, sph_word};
use sparsecode::enumerate::binomial;
use sparsecode::group_testing::{design_from_code, gt_roundtrip, kautz_singleton, verify_design, verify_disjunct};
use sparsecode::list_decoding::{converse_check, johnson_check, lwise_bias_bound_from_flat, Verdict};
use sparsecode::pipeline::{gv_rip, ks_gt, rip_ld, GvRipParams, KsGtParams, RipLdParams};
use sparsecode::props::{coherence, flat_bound_from_rip2, flat_rip_constant, rip2_constant};
use sparsecode::recovery::{
    cs_roundtrip, uniqueness_certificate, unit_circle_nodes, vandermonde_matrix, ROUNDTRIP_ERROR,
};
use sparsecode::{Caps, Code, Word};

const SLACK: f64 = 1e-9;
/// Polarization constant relating flat RIP at `l0` to RIP-2 at `2 l0`.
const FLAT_FROM_RIP: f64 = 4.0;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn caps() -> Caps {
    Caps::default()
}

fn oracle_min_distance(c: &Code) -> usize {
    let w = c.words();
    let mut best = usize::MAX;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let d = w[i].symbols().iter().zip(w[j].symbols()).filter(|(a, b)| a != b).count();
            best = best.min(d);
        }
    }
    best
}

/// Bias implied by the minimum distance: `max(0, q (1 - d/n) - 1)`.
fn implied_epsilon(c: &Code) -> f64 {
    let q = c.alphabet_size() as f64;
    let rel = oracle_min_distance(c) as f64 / c.block_length() as f64;
    (q * (1.0 - rel) - 1.0).max(0.0)
}

/// Seeded balanced codes over q in {2, 3}, n <= 12, at most 27 words, with
/// at least two classes modulo the all-ones word.
fn balanced_corpus() -> Vec<Code> {
    let mut out = Vec::new();
    let mut i = 0u64;
    while out.len() < 600 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0 + i);
        i += 1;
        let q: u32 = if out.len() % 2 == 0 { 2 } else { 3 };
        let n = rng.gen_range(4..=12);
        let code = match out.len() % 3 {
            0 => {
                let seeds = rng.gen_range(2..=27 / q as usize);
                random_balanced_code(&mut rng, q, n, seeds)
            }
            1 => {
                let far = random_code_with_distance(&mut rng, q, n, 27 / q as usize, n / 2, 200);
                sparsecode::codes::balance_closure(&far)
            }
            _ => {
                let max_k = if q == 2 { 4 } else { 3 };
                let k = rng.gen_range(2..=max_k);
                match sample_linear_code(q, n, k, 1, rng.gen(), true, GV_RETRY_BUDGET, &caps()) {
                    Ok(s) => enumerate_codewords(&s.code, &caps()).unwrap(),
                    Err(_) => continue,
                }
            }
        };
        if code.len() <= 27 && quotient_by_ones(&code).unwrap().len() >= 2 {
            out.push(code);
        }
    }
    out
}

/// Seeded binary codes, plain random and distance-controlled.
fn binary_corpus(count: usize, max_n: usize, max_words: usize, seed: u64) -> Vec<Code> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(4..=max_n);
        let m = rng.gen_range(4..=max_words);
        let code = if out.len() % 2 == 0 {
            random_code(&mut rng, 2, n, m)
        } else {
            let d = rng.gen_range(n / 4..=n / 2 + 1);
            random_code_with_distance(&mut rng, 2, n, m, d, 400)
        };
        if code.len() >= 4 {
            out.push(code);
        }
    }
    out
}

fn ac1() -> Outcome {
    let w = Word::new(2, vec![0, 1, 1, 0]).unwrap();
    let b = bool_word(&w);
    ensure(b == vec![1, 0, 0, 1, 0, 1, 1, 0], || format!("bool_word gave {b:?}"))?;
    let s = sph_word(&w);
    let want = [0.5, -0.5, -0.5, 0.5];
    let ok = s.iter().zip(want).all(|(z, x)| *z == Complex64::new(x, 0.0));
    ensure(ok, || format!("sph_word gave {s:?}"))?;
    Ok("bool and spherical images exact".into())
}

fn ac2(corpus: &[Code]) -> Outcome {
    let mut nontrivial = 0;
    for (i, c) in corpus.iter().enumerate() {
        let eps = implied_epsilon(c);
        let quotient = quotient_by_ones(c).unwrap();
        let bias = code_bias(&quotient, &caps()).unwrap().bias;
        ensure(bias <= eps + SLACK, || format!("code {i}: bias {bias} > eps {eps}"))?;
        if eps < 1.0 {
            nontrivial += 1;
        }
    }
    Ok(format!("{} codes, {nontrivial} with eps < 1, zero violations", corpus.len()))
}

fn ac3(corpus: &[Code]) -> Outcome {
    let mut checks = 0;
    for (i, c) in corpus.iter().enumerate() {
        let eps = implied_epsilon(c);
        let m = sph_code(&quotient_by_ones(c).unwrap());
        let mu = coherence(&m).unwrap().coherence;
        ensure(mu <= 2.0 * eps + SLACK, || format!("code {i}: coherence {mu} > 2 eps {}", 2.0 * eps))?;
        for l in 2..=4.min(m.cols()) {
            let rip = rip2_constant(&m, l, &caps()).unwrap().constant;
            // Rounding noise only: orthogonal columns give rip ~ 1e-16 against mu = 0.
            ensure(rip <= l as f64 * mu + 1e-12, || format!("code {i}, L={l}: rip {rip} > L mu {}", l as f64 * mu))?;
            checks += 1;
        }
    }
    Ok(format!("{} codes, {checks} RIP checks, zero violations", corpus.len()))
}

fn ac4(corpus: &[Code]) -> Outcome {
    let mut checks = 0;
    for (i, c) in corpus.iter().enumerate() {
        let eps = implied_epsilon(c);
        let q = c.alphabet_size() as f64;
        let sph = sph_code(&quotient_by_ones(c).unwrap());
        let boolean = bool_code(c, true);
        for l in 2..=4usize {
            let lf = l as f64;
            if l <= sph.cols() {
                let rip = rip2_constant(&sph, l, &caps()).unwrap().constant;
                ensure(rip <= 2.0 * lf * eps + SLACK, || format!("code {i}, L={l}: Sph rip {rip} > 2 L eps"))?;
                checks += 1;
            }
            if l <= boolean.cols() {
                let rip = rip2_constant(&boolean, l, &caps()).unwrap().constant;
                let bound = (1.0 + eps) * lf / q;
                ensure(rip <= bound + SLACK, || format!("code {i}, L={l}: Bool rip {rip} > {bound}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} RIP checks, zero violations"))
}

fn ac5() -> Outcome {
    let corpus = binary_corpus(200, 14, 12, 0xF1A7);
    let mut checks = 0;
    for (i, c) in corpus.iter().enumerate() {
        let m = sph_code(c);
        for l0 in 1..=3usize {
            if 2 * l0 > c.len() {
                continue;
            }
            let flat = flat_rip_constant(&m, l0, &caps()).unwrap().constant;
            // (a) polarization
            let rip = rip2_constant(&m, 2 * l0, &caps()).unwrap().constant;
            ensure(flat <= FLAT_FROM_RIP * rip + SLACK, || format!("code {i}, L0={l0}: flat {flat} > 4 rip {rip}"))?;
            ensure(flat <= flat_bound_from_rip2(rip, l0) + SLACK, || format!("code {i}, L0={l0}: polarization"))?;
            // (b) L-wise biases to flat RIP
            let mut alpha: f64 = 0.0;
            for l in 2..=2 * l0 {
                alpha = alpha.max(l as f64 * lwise_bias(c, l, &caps()).unwrap().bias);
            }
            ensure(flat <= 4.0 * alpha + SLACK, || format!("code {i}, L0={l0}: flat {flat} > 4 alpha {alpha}"))?;
            // (c) flat RIP to L-wise biases
            for l in 2..=(2 * l0 + 1).min(c.len()) {
                if let Some(bound) = lwise_bias_bound_from_flat(flat, l0, l) {
                    let b = lwise_bias(c, l, &caps()).unwrap().bias;
                    ensure(b <= bound + SLACK, || format!("code {i}, L0={l0}, l={l}: bias {b} > {bound}"))?;
                }
            }
            checks += 1;
        }
    }
    Ok(format!("{} codes, {checks} (code, L0) instances, zero violations", corpus.len()))
}

fn ac6() -> Outcome {
    let ks = kautz_singleton(5, 2, &caps()).unwrap();
    let (rows, cols) = (ks.matrix.rows(), ks.matrix.cols());
    ensure((rows, cols) == (25, 25), || format!("matrix is {rows}x{cols}"))?;
    // Oracle: largest agreement between distinct degree < 2 polynomials on GF(5).
    let mut oracle_r = 0;
    let polys: Vec<(u32, u32)> = (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).collect();
    for (i, &(a0, a1)) in polys.iter().enumerate() {
        for &(b0, b1) in &polys[i + 1..] {
            let agree = (0..5).filter(|x| (a0 + a1 * x) % 5 == (b0 + b1 * x) % 5).count();
            oracle_r = oracle_r.max(agree);
        }
    }
    let r = verify_design(&ks.design).r;
    ensure(r == oracle_r && r <= 2, || format!("design r = {r}, oracle {oracle_r}"))?;
    let disjunct = verify_disjunct(&ks.matrix, 2, &caps()).unwrap();
    ensure(disjunct.disjunct, || format!("not 2-disjunct: {:?}", disjunct.witness))?;
    let rt = gt_roundtrip(&ks.matrix, 2, 0).unwrap();
    ensure(rt.exhaustive && rt.vectors_checked == 326 && rt.failures == 0, || format!("{rt:?}"))?;
    Ok(format!("25x25, r = {r}, 2-disjunct, round trip 326/326"))
}

fn ac7(corpus: &[Code]) -> Outcome {
    for (i, c) in corpus.iter().enumerate() {
        let n = c.block_length();
        let w = c.words();
        let mut oracle = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                let dist = w[a].symbols().iter().zip(w[b].symbols()).filter(|(x, y)| x != y).count();
                oracle = oracle.max(n - dist);
            }
        }
        let r = verify_design(&design_from_code(c)).r;
        let d = min_distance(c, &caps()).unwrap().absolute as usize;
        ensure(r == oracle && r <= n - d, || format!("code {i}: r = {r}, oracle {oracle}, n - d = {}", n - d))?;
    }
    Ok(format!("{} codes, measured r exact and within n' - d", corpus.len()))
}

fn ac8() -> Outcome {
    let m = vandermonde_matrix(&unit_circle_nodes(8), 4).unwrap();
    let u = uniqueness_certificate(&m, 2, &caps()).unwrap();
    ensure(u.unique, || format!("not unique: {u:?}"))?;
    let rt = cs_roundtrip(&m, 2, 8, 10, &caps()).unwrap();
    ensure(
        rt.supports_checked == 37 && rt.trials == 370 && rt.failures == 0 && rt.max_error <= ROUNDTRIP_ERROR,
        || format!("{rt:?}"),
    )?;
    Ok(format!("certificate holds, 370/370 recovered, max error {:.1e}", rt.max_error))
}

#[derive(Default)]
struct Tally {
    pass: usize,
    vacuous: usize,
    not_applicable: usize,
    fail: usize,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Vacuous => self.vacuous += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
            Verdict::Fail => self.fail += 1,
        }
    }
}

fn ac9() -> Outcome {
    let corpus = binary_corpus(1000, 14, 16, 0x10D);
    let mut johnson = Tally::default();
    let mut converse = Tally::default();
    for (i, c) in corpus.iter().enumerate() {
        for eps in [0.25, 1.0 / 3.0, 0.5] {
            let j = johnson_check(c, eps, &caps()).unwrap();
            ensure(!j.verdict.is_counterexample(), || format!("code {i}, eps {eps}: {j:?}"))?;
            johnson.add(j.verdict);
            for l in [2, 3] {
                let v = converse_check(c, l, eps, &caps()).unwrap();
                ensure(!v.verdict.is_counterexample(), || format!("code {i}, L {l}, eps {eps}: {v:?}"))?;
                converse.add(v.verdict);
            }
        }
    }
    ensure(johnson.pass > 0 && converse.pass > 0, || "no premise-satisfying instance".into())?;
    Ok(format!(
        "{} codes; johnson pass/vacuous {}/{}; converse pass/vacuous/n.a. {}/{}/{}; zero counterexamples",
        corpus.len(),
        johnson.pass,
        johnson.vacuous + johnson.not_applicable,
        converse.pass,
        converse.vacuous,
        converse.not_applicable
    ))
}

fn ac10(balanced: &[Code]) -> Outcome {
    let binary = binary_corpus(300, 14, 16, 0x10D);
    let mut checks = 0;
    for (i, c) in balanced.iter().chain(&binary).enumerate() {
        let two = lwise_distance(c, 2, &caps()).unwrap();
        let md = min_distance(c, &caps()).unwrap();
        ensure(two.relative_cmp(&md).is_eq(), || format!("code {i}: L=2 {} vs min {}", two.relative, md.relative))?;
        let mut prev = two;
        for l in 3..=c.len() {
            if binomial(c.len(), l) > 100_000 {
                break;
            }
            let cur = lwise_distance(c, l, &caps()).unwrap();
            ensure(cur.relative_cmp(&prev).is_ge(), || {
                format!("code {i}: dist_{l} {} < dist_{} {}", cur.relative, l - 1, prev.relative)
            })?;
            prev = cur;
            checks += 1;
        }
    }
    Ok(format!("{} codes, {checks} consecutive-order comparisons, zero violations", balanced.len() + binary.len()))
}

fn ac11() -> Outcome {
    let h = q_ary_entropy(2, 0.5).unwrap();
    ensure(h == 1.0, || format!("h_2(1/2) = {h}"))?;
    let mut worst: f64 = 0.0;
    for q in [2u32, 3, 5] {
        for i in 1..=1000 {
            let e = 0.1 * i as f64 / 1000.0;
            let exact = gv_rate(q, 1.0 - (1.0 + e) / q as f64).unwrap();
            let approx = gv_critical_expansion(q, e).unwrap();
            let gap = (exact - approx).abs();
            ensure(gap <= 5.0 * e.powi(4), || format!("q={q}, eps={e}: gap {gap:e}"))?;
            worst = worst.max(gap / e.powi(4));
        }
        let top = 1.0 - 1.0 / q as f64;
        for i in 0..100 {
            let delta = top * i as f64 / 100.0;
            let (m, g) = (mrrw_rate_bound(q, delta).unwrap(), gv_rate(q, delta).unwrap());
            ensure(m >= g - 1e-12, || format!("q={q}, delta={delta}: mrrw {m} < gv {g}"))?;
        }
    }
    Ok(format!("h_2(1/2) = 1, expansion gap <= {worst:.3} eps^4, mrrw >= gv"))
}

fn pipelines_json() -> Vec<String> {
    let c = caps();
    let mut out = Vec::new();
    for p in [
        GvRipParams { q: 2, n: 14, delta: 0.45, order: 2, seed: 11, random_rows: None },
        GvRipParams { q: 3, n: 9, delta: 0.4, order: 3, seed: 5, random_rows: Some(2) },
    ] {
        out.push(serde_json::to_string(&gv_rip(p, &c).unwrap()).unwrap());
    }
    for p in [KsGtParams { q: 5, k: 2, sparsity: 2, seed: 3 }, KsGtParams { q: 7, k: 2, sparsity: 3, seed: 3 }] {
        out.push(serde_json::to_string(&ks_gt(p, &c).unwrap()).unwrap());
    }
    let sample = sample_linear_code(2, 12, 4, 4, 21, false, GV_RETRY_BUDGET, &c).unwrap();
    let m = sph_code(&enumerate_codewords(&sample.code, &c).unwrap());
    let report = rip_ld(&m, RipLdParams { order: 4, alpha: 0.9, epsilon: 0.5 }, &c).unwrap();
    out.push(serde_json::to_string(&report).unwrap());
    out
}

fn ac12() -> Outcome {
    let runs: Vec<Vec<String>> = [1, 4, 1, 4]
        .iter()
        .map(|&t| ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(pipelines_json))
        .collect();
    for r in &runs[1..] {
        ensure(*r == runs[0], || "pipeline reports differ between runs".into())?;
    }
    Ok(format!("{} pipeline reports byte-identical over 4 runs at 1 and 4 workers", runs[0].len()))
}

fn main() {
    let balanced = balanced_corpus();
    let criteria: Vec<Criterion> = vec![
        ("embedding worked example", Box::new(ac1)),
        ("bias of C/1", Box::new(|| ac2(&balanced))),
        ("coherence chain", Box::new(|| ac3(&balanced))),
        ("RIP corollaries", Box::new(|| ac4(&balanced))),
        ("flat RIP equivalences", Box::new(ac5)),
        ("Kautz-Singleton end to end", Box::new(ac6)),
        ("design parameters from codes", Box::new(|| ac7(&balanced))),
        ("Vandermonde identifiability", Box::new(ac8)),
        ("list-decoding lemmas", Box::new(ac9)),
        ("L-wise distance monotonicity", Box::new(|| ac10(&balanced))),
        ("bounds calculators", Box::new(ac11)),
        ("pipeline determinism", Box::new(ac12)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] AC-{}: {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] AC-{}: {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
