use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsecode")).args(args).env_remove("SPARSECODE_CAP").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad stdout ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn kautz_singleton_build_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "ks.json");
    let b = run(&["build", "kautz-singleton", "--q", "5", "--k", "2", "--out", &out]);
    assert_eq!(b.status.code(), Some(0));
    let report = json(&b);
    assert_eq!((report["rows"].as_u64(), report["cols"].as_u64()), (Some(25), Some(25)));
    let file: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["kind"], "binary");
    assert_eq!(file["rows"].as_array().unwrap().len(), 25);
    let prov: Value = serde_json::from_str(&fs::read_to_string(format!("{out}.provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["construction"], "kautz-singleton");

    let v = run(&["verify", "disjunct", "--input", &out, "--L", "2"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["disjunct"], true);
    let d = run(&["verify", "design", "--input", &out, "--threshold", "1"]);
    assert_eq!(d.status.code(), Some(0));
    assert_eq!(json(&d)["r"], 1);
    let g = run(&["gt-roundtrip", "--input", &out, "--L", "2"]);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(json(&g)["vectors_checked"], 326);
}

#[test]
fn rs_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "rs.txt");
    assert_eq!(run(&["build", "rs-code", "--q", "3", "--k", "1", "--out", &out]).status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "3 3\n0 0 0\n1 1 1\n2 2 2\n");
}

#[test]
fn gv_code_rejects_large_delta() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "c.txt");
    let r = run(&["build", "gv-code", "--q", "2", "--n", "10", "--delta", "0.5", "--seed", "1", "--out", &out]);
    assert_eq!(r.status.code(), Some(2));
    assert!(!Path::new(&out).exists());
}

#[test]
fn gv_code_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.txt"), path(dir.path(), "b.txt"));
    for (out, workers) in [(&a, "1"), (&b, "4")] {
        let r = run(&[
            "--workers",
            workers,
            "build",
            "gv-code",
            "--q",
            "2",
            "--n",
            "12",
            "--delta",
            "0.2",
            "--seed",
            "9",
            "--out",
            out,
        ]);
        assert_eq!(r.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(format!("{a}.provenance.json")).unwrap(), fs::read(format!("{b}.provenance.json")).unwrap());
}

#[test]
fn rip2_thresholds_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let id = path(dir.path(), "id.json");
    fs::write(&id, r#"{"kind":"binary","rows":["1000","0100","0010","0001"]}"#).unwrap();
    let r = run(&["verify", "rip2", "--input", &id, "--L", "2", "--threshold", "0.5"]);
    assert_eq!(r.status.code(), Some(0));
    let v = json(&r);
    assert_eq!(v["constant"].as_f64(), Some(0.0));
    assert_eq!(v["subsets_checked"], 6);

    let code = path(dir.path(), "c.txt");
    fs::write(&code, "2 3\n0 0 0\n0 1 1\n1 0 1\n").unwrap();
    let r = run(&["verify", "rip2", "--input", &code, "--L", "2", "--threshold", "0.1"]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(json(&r)["holds"], false);

    let capped = Command::new(env!("CARGO_BIN_EXE_sparsecode"))
        .args(["verify", "rip2", "--input", &id, "--L", "2"])
        .env("SPARSECODE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("enumeration cap exceeded"));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    fs::write(&bad, "{not json").unwrap();
    let r = run(&["verify", "coherence", "--input", &bad]);
    assert_eq!(r.status.code(), Some(2));
    assert!(r.stdout.is_empty());
}

#[test]
fn code_properties() {
    let dir = tempfile::tempdir().unwrap();
    let code = path(dir.path(), "c.txt");
    fs::write(&code, "2 4\n0 0 0 0\n0 0 1 1\n0 1 0 1\n0 1 1 0\n").unwrap();
    let d = json(&run(&["verify", "lwise-distance", "--input", &code, "--L", "2", "--threshold", "0.5"]));
    assert_eq!(d["constant"].as_f64(), Some(0.5));
    let b = run(&["verify", "lwise-bias", "--input", &code, "--L", "2", "--threshold", "0"]);
    assert_eq!(b.status.code(), Some(0));
    // Center 0001 is within distance 1 of three codewords.
    let l = run(&["verify", "list-decode", "--input", &code, "--rho", "0.25", "--L", "3"]);
    assert_eq!(l.status.code(), Some(1));
    assert_eq!(json(&l)["max_list_size"], 3);
    assert_eq!(run(&["verify", "list-decode", "--input", &code, "--rho", "0.25", "--L", "4"]).status.code(), Some(0));
    let j = run(&["verify", "list-decode", "--input", &code, "--lemma", "johnson", "--epsilon", "0.5"]);
    assert_eq!(j.status.code(), Some(0));
}

#[test]
fn vandermonde_recovery() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "v.json");
    assert_eq!(run(&["build", "vandermonde", "--n", "4", "--N", "8", "--out", &m]).status.code(), Some(0));
    let k = run(&["verify", "kernel", "--input", &m, "--L", "2"]);
    assert_eq!(k.status.code(), Some(0));
    let r = run(&["cs-roundtrip", "--input", &m, "--L", "2", "--seed", "4"]);
    assert_eq!(r.status.code(), Some(0));
    let v = json(&r);
    assert_eq!((v["trials"].as_u64(), v["failures"].as_u64()), (Some(370), Some(0)));
    assert!(v["max_error"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn pipelines() {
    let ks = run(&["pipeline", "ks-gt", "--q", "5", "--k", "2"]);
    assert_eq!(ks.status.code(), Some(0));
    let v = json(&ks);
    assert_eq!(v["report"]["disjunct"], true);
    assert_eq!(v["report"]["roundtrip"]["vectors_checked"], 326);
    assert_eq!(v["report"]["roundtrip"]["failures"], 0);

    let gv = run(&["pipeline", "gv-rip", "--q", "2", "--n", "14", "--delta", "0.45", "--L", "2", "--seed", "3"]);
    assert_eq!(gv.status.code(), Some(0));
    let v = json(&gv);
    assert_eq!(v["verdict"], "pass");
    let line = &v["report"]["rip_spherical"];
    assert!(line["measured"].as_f64().unwrap() <= line["bound"].as_f64().unwrap());

    let dir = tempfile::tempdir().unwrap();
    let id = path(dir.path(), "id.json");
    fs::write(&id, r#"{"kind":"binary","rows":["10","01"]}"#).unwrap();
    let ld = run(&["pipeline", "rip-ld", "--input", &id, "--L", "2", "--alpha", "0.5", "--epsilon", "0.5"]);
    assert_eq!(ld.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ld.stderr).contains("stage rip-ld"));
}

#[test]
fn rip_ld_on_sign_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let code = path(dir.path(), "h.txt");
    fs::write(&code, "2 4\n0 0 0 0\n0 0 1 1\n0 1 0 1\n0 1 1 0\n").unwrap();
    let m = path(dir.path(), "h.json");
    assert_eq!(run(&["build", "sph", "--input", &code, "--out", &m]).status.code(), Some(0));
    let r = run(&["pipeline", "rip-ld", "--input", &m, "--L", "2", "--alpha", "0.1", "--epsilon", "0.5"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(json(&r)["verdict"], "pass");
}

#[test]
fn pipeline_reports_ignore_worker_count() {
    let args =
        ["pipeline", "gv-rip", "--q", "3", "--n", "9", "--delta", "0.4", "--L", "3", "--seed", "5", "--rows", "2"];
    let one = run(&[&["--workers", "1"], &args[..]].concat());
    let four = run(&[&["--workers", "4"], &args[..]].concat());
    assert_eq!(without_elapsed(json(&one)), without_elapsed(json(&four)));
    let strip = |o: &Output| {
        String::from_utf8(o.stdout.clone())
            .unwrap()
            .lines()
            .filter(|l| !l.contains("elapsed_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn bounds_record() {
    let r = run(&["bounds", "--q", "2", "--delta", "0.5"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(json(&r)["entropy"].as_f64(), Some(1.0));
    assert_eq!(run(&["bounds"]).status.code(), Some(2));
}
