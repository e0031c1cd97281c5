use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Map, Value};

use sparsecode::bounds::{
    coherence_lower_indicator, gv_critical_expansion, gv_rate, mrrw_rate_bound, q_ary_entropy, row_bound_indicators,
    RowBoundQuery,
};
use sparsecode::codes::{enumerate_codewords, lwise_bias, lwise_distance, random_linear_code_gv, reed_solomon};
use sparsecode::embeddings::{binary_code_from_sph, bool_code, sph_code};
use sparsecode::group_testing::{
    design_from_code, gt_roundtrip, kautz_singleton, matrix_from_design, verify_design, verify_disjunct, Design,
};
use sparsecode::list_decoding::{converse_check, johnson_check, list_size_at_radius, Verdict};
use sparsecode::pipeline::{gv_rip, ks_gt, rip_ld, GvRipParams, KsGtParams, RipLdParams};
use sparsecode::props::{coherence, flat_rip_constant, kernel_injectivity, rip2_constant, translate_flat_to_rip};
use sparsecode::recovery::{cs_roundtrip, unit_circle_nodes, vandermonde_matrix};
use sparsecode::{BinaryMatrix, Caps, Code, Complex64, ComplexMatrix, MatrixFile};

use crate::{
    BoundsArgs, BuildKind, Command, CsRoundtripArgs, Embedding, GtRoundtripArgs, Lemma, PipelineName, Property,
    VerifyArgs,
};

/// Runs one command; `Ok(false)` means the checked property does not hold.
pub fn run(command: Command) -> Result<bool> {
    let caps = Caps::from_env()?;
    let start = Instant::now();
    let (mut report, holds, summary) = match command {
        Command::Build { kind } => build(kind, &caps)?,
        Command::Verify(args) => verify(args, &caps)?,
        Command::Bounds(args) => (bounds(&args)?, true, "bounds evaluated".to_string()),
        Command::GtRoundtrip(args) => gt(args)?,
        Command::CsRoundtrip(args) => cs(args, &caps)?,
        Command::Pipeline { name } => pipeline(name, &caps)?,
    };
    if let Value::Object(map) = &mut report {
        map.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    eprintln!("{} {summary}", if holds { "ok:" } else { "VIOLATED:" });
    Ok(holds)
}

type Outcome = (Value, bool, String);

enum Input {
    Code(Code),
    Matrix(MatrixFile),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        MatrixFile::from_json(&text).map(Input::Matrix)
    } else {
        Code::from_text(&text).map(Input::Code)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

fn as_complex(input: Input, embedding: Embedding) -> Result<ComplexMatrix> {
    Ok(match input {
        Input::Matrix(f) => f.to_complex()?,
        Input::Code(c) => match embedding {
            Embedding::Sph => sph_code(&c),
            Embedding::Bool => bool_code(&c, true),
        },
    })
}

fn as_binary(input: Input) -> Result<BinaryMatrix> {
    Ok(match input {
        Input::Matrix(f) => f.to_binary()?,
        Input::Code(c) => matrix_from_design(&design_from_code(&c)),
    })
}

fn as_code(input: Input) -> Result<Code> {
    Ok(match input {
        Input::Code(c) => c,
        Input::Matrix(f) => binary_code_from_sph(&f.to_complex()?)?,
    })
}

fn with_fields(value: impl serde::Serialize, fields: &[(&str, Value)]) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    let map = v.as_object_mut().ok_or_else(|| anyhow!("report is not an object"))?;
    for (k, x) in fields {
        map.insert((*k).to_string(), x.clone());
    }
    Ok(v)
}

fn write_with_provenance(
    out: &Path,
    content: &str,
    construction: &str,
    params: Value,
    seed: Option<u64>,
) -> Result<()> {
    fs::write(out, content).with_context(|| format!("writing {}", out.display()))?;
    let provenance = json!({
        "construction": construction,
        "params": params,
        "seed": seed,
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    let mut name = out.as_os_str().to_owned();
    name.push(".provenance.json");
    fs::write(&name, serde_json::to_string_pretty(&provenance)? + "\n")
        .with_context(|| format!("writing {}", Path::new(&name).display()))?;
    Ok(())
}

fn build(kind: BuildKind, caps: &Caps) -> Result<Outcome> {
    let (construction, out, content, params, seed, shape) = match kind {
        BuildKind::GvCode { q, n, delta, seed, slack, out } => {
            let sample = random_linear_code_gv(q, n, delta, seed, slack)?;
            let code = enumerate_codewords(&sample.code, caps)?;
            let params = json!({
                "q": q, "n": n, "delta": delta, "slack": slack,
                "dimension": sample.code.dimension(), "attempts": sample.attempts,
                "min_distance": sample.min_distance, "generator": sample.code.generator_rows(),
            });
            ("gv-code", out, code.to_text(), params, Some(seed), (code.len(), n))
        }
        BuildKind::RsCode { q, k, out } => {
            let code = reed_solomon(q, k, caps)?;
            ("rs-code", out, code.to_text(), json!({"q": q, "k": k}), None, (code.len(), q as usize))
        }
        BuildKind::Sph { input, out } => {
            let Input::Code(c) = read_input(&input)? else { bail!("sph needs a code file") };
            let m = sph_code(&c);
            let params = json!({"input": input, "q": c.alphabet_size(), "n": c.block_length(), "size": c.len()});
            ("sph", out, m.to_file().to_json(), params, None, (m.rows(), m.cols()))
        }
        BuildKind::Bool { input, normalize, out } => {
            let Input::Code(c) = read_input(&input)? else { bail!("bool needs a code file") };
            let params = json!({"input": input, "normalize": normalize, "q": c.alphabet_size(), "n": c.block_length(), "size": c.len()});
            let (text, shape) = if normalize {
                let m = bool_code(&c, true);
                (m.to_file().to_json(), (m.rows(), m.cols()))
            } else {
                let m = matrix_from_design(&design_from_code(&c));
                (m.to_file().to_json(), (m.rows(), m.cols()))
            };
            ("bool", out, text, params, None, shape)
        }
        BuildKind::KautzSingleton { q, k, out } => {
            let ks = kautz_singleton(q, k, caps)?;
            let params = serde_json::to_value(&ks.record)?;
            let shape = (ks.matrix.rows(), ks.matrix.cols());
            ("kautz-singleton", out, ks.matrix.to_file().to_json(), params, None, shape)
        }
        BuildKind::Vandermonde { n, big_n, nodes, out } => {
            let nodes: Vec<Complex64> = match (nodes, big_n) {
                (Some(real), None) => real.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
                (Some(real), Some(count)) if count == real.len() => {
                    real.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
                }
                (Some(_), Some(_)) => bail!("--N must match the number of --nodes"),
                (None, Some(count)) => unit_circle_nodes(count),
                (None, None) => bail!("give --N or --nodes"),
            };
            let m = vandermonde_matrix(&nodes, n)?;
            let params =
                json!({"n": n, "N": nodes.len(), "nodes": nodes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()});
            ("vandermonde", out, m.to_file().to_json(), params, None, (m.rows(), m.cols()))
        }
    };
    write_with_provenance(&out, &content, construction, params, seed)?;
    let summary = format!("built {construction} ({} x {}) at {}", shape.0, shape.1, out.display());
    let report = if matches!(construction, "gv-code" | "rs-code") {
        json!({"construction": construction, "out": out, "size": shape.0, "block_length": shape.1})
    } else {
        json!({"construction": construction, "out": out, "rows": shape.0, "cols": shape.1})
    };
    Ok((report, true, summary))
}

fn need<T>(value: Option<T>, flag: &str, property: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("{property} needs {flag}"))
}

fn at_most(constant: f64, threshold: Option<f64>) -> bool {
    threshold.is_none_or(|t| constant <= t)
}

fn verify(args: VerifyArgs, caps: &Caps) -> Result<Outcome> {
    let VerifyArgs { property, input, order, threshold, embedding, rho, lemma, epsilon } = args;
    let input = read_input(&input)?;
    let base = |name: &str, holds: bool| {
        vec![("property", json!(name)), ("threshold", json!(threshold)), ("holds", json!(holds))]
    };
    let (report, holds, summary) = match property {
        Property::Rip2 => {
            let l = need(order, "--L", "rip2")?;
            let r = rip2_constant(&as_complex(input, embedding)?, l, caps)?;
            let holds = at_most(r.constant, threshold);
            let s = format!("rip2 order {l}: constant {:.6} over {} subsets", r.constant, r.subsets_checked);
            (with_fields(&r, &base("rip2", holds))?, holds, s)
        }
        Property::FlatRip => {
            let l0 = need(order, "--L", "flat-rip")?;
            let r = flat_rip_constant(&as_complex(input, embedding)?, l0, caps)?;
            let holds = at_most(r.constant, threshold);
            let s = format!("flat RIP order {l0}: constant {:.6}", r.constant);
            (with_fields(&r, &base("flat-rip", holds))?, holds, s)
        }
        Property::Coherence => {
            let r = coherence(&as_complex(input, embedding)?)?;
            let holds = at_most(r.coherence, threshold);
            let s = format!("coherence {:.6} over {} pairs", r.coherence, r.pairs_checked);
            let mut fields = base("coherence", holds);
            fields.push(("constant", json!(r.coherence)));
            (with_fields(&r, &fields)?, holds, s)
        }
        Property::Disjunct => {
            let l = need(order, "--L", "disjunct")?;
            let r = verify_disjunct(&as_binary(input)?, l, caps)?;
            let s = format!("{}-disjunct: {} ({} pairs covered)", l, r.disjunct, r.pairs_checked);
            let holds = r.disjunct;
            (with_fields(&r, &base("disjunct", holds))?, holds, s)
        }
        Property::Design => {
            let design = match input {
                Input::Code(c) => design_from_code(&c),
                Input::Matrix(f) => Design::try_from(&f.to_binary()?)?,
            };
            let r = verify_design(&design);
            let holds = at_most(r.r as f64, threshold);
            let s = format!("design ({}, {}, {})", r.ground_size, r.set_size, r.r);
            let mut fields = base("design", holds);
            fields.push(("constant", json!(r.r)));
            (with_fields(&r, &fields)?, holds, s)
        }
        Property::ListDecode => {
            let code = as_code(input)?;
            match lemma {
                None => {
                    let rho = need(rho, "--rho", "list-decode")?;
                    let r = list_size_at_radius(&code, rho, caps)?;
                    let holds = order.is_none_or(|l| r.max_list_size < l);
                    let s = format!(
                        "max list size {} at radius {} ({} centers)",
                        r.max_list_size, r.radius, r.centers_checked
                    );
                    let mut fields = base("list-decode", holds);
                    fields.push(("order", json!(order)));
                    (with_fields(&r, &fields)?, holds, s)
                }
                Some(Lemma::Johnson) => {
                    let eps = need(epsilon, "--epsilon", "johnson")?;
                    let r = johnson_check(&code, eps, caps)?;
                    let holds = r.verdict != Verdict::Fail;
                    let s = format!("johnson at eps {eps}: {:?}", r.verdict);
                    (with_fields(&r, &base("johnson", holds))?, holds, s)
                }
                Some(Lemma::Converse) => {
                    let eps = need(epsilon, "--epsilon", "converse")?;
                    let l = need(order, "--L", "converse")?;
                    let r = converse_check(&code, l, eps, caps)?;
                    let holds = r.verdict != Verdict::Fail;
                    let s = format!("converse at L {l}, eps {eps}: {:?}", r.verdict);
                    (with_fields(&r, &base("converse", holds))?, holds, s)
                }
            }
        }
        Property::LwiseDistance => {
            let l = need(order, "--L", "lwise-distance")?;
            let r = lwise_distance(&as_code(input)?, l, caps)?;
            let holds = threshold.is_none_or(|t| r.relative >= t);
            let s = format!("{l}-wise distance {:.6}", r.relative);
            let mut fields = base("lwise-distance", holds);
            fields.extend([("order", json!(l)), ("constant", json!(r.relative))]);
            (with_fields(&r, &fields)?, holds, s)
        }
        Property::LwiseBias => {
            let l = need(order, "--L", "lwise-bias")?;
            let r = lwise_bias(&as_code(input)?, l, caps)?;
            let holds = at_most(r.bias, threshold);
            let s = format!("{l}-wise bias {:.6}", r.bias);
            let mut fields = base("lwise-bias", holds);
            fields.extend([("order", json!(l)), ("constant", json!(r.bias))]);
            (with_fields(&r, &fields)?, holds, s)
        }
        Property::Kernel => {
            let l = need(order, "--L", "kernel")?;
            let r = kernel_injectivity(&as_complex(input, embedding)?, l, caps)?;
            let holds = r.injective;
            let s = format!(
                "injective on {}-column subsets: {} (min singular value {:.3e})",
                r.subset_size, r.injective, r.min_singular_value
            );
            let mut fields = base("kernel", holds);
            fields.push(("constant", json!(r.min_singular_value)));
            (with_fields(&r, &fields)?, holds, s)
        }
    };
    Ok((report, holds, summary))
}

fn bounds(args: &BoundsArgs) -> Result<Value> {
    let mut out = Map::new();
    if let (Some(q), Some(delta)) = (args.q, args.delta) {
        out.insert("entropy".into(), json!(q_ary_entropy(q, delta)?));
        out.insert("mrrw_rate".into(), json!(mrrw_rate_bound(q, delta)?));
        if delta < 1.0 - 1.0 / q as f64 {
            out.insert("gv_rate".into(), json!(gv_rate(q, delta)?));
        }
    }
    if let (Some(q), Some(eps)) = (args.q, args.epsilon) {
        out.insert("gv_critical_expansion".into(), json!(gv_critical_expansion(q, eps)?));
        if eps > 0.0 && eps < q as f64 - 1.0 {
            out.insert("gv_rate_at_critical_distance".into(), json!(gv_rate(q, 1.0 - (1.0 + eps) / q as f64)?));
        }
    }
    if let (Some(n), Some(big_n)) = (args.n, args.big_n) {
        out.insert("coherence_lower_indicator".into(), json!(coherence_lower_indicator(n, big_n as f64)?));
    }
    if let (Some(sparsity), Some(columns), Some(r), Some(n_prime)) = (args.sparsity, args.big_n, args.r, args.n_prime) {
        let (q, alpha) = match (args.q, args.alpha) {
            (Some(q), Some(a)) => (Some(u64::from(q)), Some(a)),
            _ => (None, None),
        };
        let query = RowBoundQuery { sparsity, columns, r, n_prime, q, alpha };
        out.insert("row_bounds".into(), serde_json::to_value(row_bound_indicators(&query)?)?);
    }
    if let (Some(alpha), Some(l)) = (args.alpha, args.sparsity) {
        out.insert("flat_to_rip".into(), serde_json::to_value(translate_flat_to_rip(alpha, l as usize)?)?);
    }
    if out.is_empty() {
        bail!("no bound applies to the given parameters; try --q with --delta or --epsilon");
    }
    out.insert(
        "params".into(),
        json!({
            "q": args.q, "delta": args.delta, "epsilon": args.epsilon, "n": args.n, "N": args.big_n,
            "L": args.sparsity, "r": args.r, "n_prime": args.n_prime, "alpha": args.alpha,
        }),
    );
    Ok(Value::Object(out))
}

fn gt(args: GtRoundtripArgs) -> Result<Outcome> {
    let Input::Matrix(f) = read_input(&args.input)? else { bail!("gt-roundtrip needs a binary matrix file") };
    let r = gt_roundtrip(&f.to_binary()?, args.weight, args.seed)?;
    let holds = r.failures == 0;
    let s = format!("{} of {} inputs recovered", r.vectors_checked - r.failures, r.vectors_checked);
    Ok((with_fields(&r, &[("holds", json!(holds))])?, holds, s))
}

fn cs(args: CsRoundtripArgs, caps: &Caps) -> Result<Outcome> {
    let Input::Matrix(f) = read_input(&args.input)? else { bail!("cs-roundtrip needs a matrix file") };
    let r = cs_roundtrip(&f.to_complex()?, args.sparsity, args.seed, args.trials, caps)?;
    let holds = r.failures == 0;
    let s = format!("{} of {} trials recovered, max error {:.2e}", r.trials - r.failures, r.trials, r.max_error);
    Ok((with_fields(&r, &[("holds", json!(holds))])?, holds, s))
}

fn pipeline(name: PipelineName, caps: &Caps) -> Result<Outcome> {
    let (name, report, verdict) = match name {
        PipelineName::GvRip { q, n, delta, order, seed, rows } => {
            let r = gv_rip(GvRipParams { q, n, delta, order, seed, random_rows: rows }, caps)?;
            for line in [&r.bias, &r.coherence, &r.rip_spherical, &r.rip_vs_coherence, &r.rip_boolean] {
                eprintln!(
                    "  {}: {:.6} vs {:.6} {}",
                    line.label,
                    line.measured,
                    line.bound,
                    if line.holds { "ok" } else { "VIOLATED" }
                );
            }
            ("gv-rip", serde_json::to_value(&r)?, r.verdict)
        }
        PipelineName::KsGt { q, k, sparsity, seed } => {
            let r = ks_gt(KsGtParams { q, k, sparsity, seed }, caps)?;
            eprintln!(
                "  {}x{}, r = {}, {}-disjunct: {}, round trip {}/{}",
                r.rows,
                r.cols,
                r.design_r,
                sparsity,
                r.disjunct,
                r.roundtrip.vectors_checked - r.roundtrip.failures,
                r.roundtrip.vectors_checked
            );
            ("ks-gt", serde_json::to_value(&r)?, r.verdict)
        }
        PipelineName::RipLd { input, order, alpha, epsilon } => {
            let Input::Matrix(f) = read_input(&input)? else { bail!("rip-ld needs a matrix file") };
            let r = rip_ld(&f.to_complex()?, RipLdParams { order, alpha, epsilon }, caps)?;
            ("rip-ld", serde_json::to_value(&r)?, r.verdict)
        }
    };
    let holds = verdict != Verdict::Fail;
    let report = json!({"pipeline": name, "verdict": verdict, "report": report});
    Ok((report, holds, format!("pipeline {name}: {verdict:?}")))
}
