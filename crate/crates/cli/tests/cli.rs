use serde_json::Value;
use sk3_cli::{run, Report, SCHEMA_VERSION};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn sk3(args: &[&str]) -> sk3_cli::Outcome {
    run(std::iter::once("sk3").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = sk3(&a);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn report_for_exceptional_form() {
    let v = json(&["k3", "report", "1", "0", "3"]);
    assert_eq!(v["schema_version"], SCHEMA_VERSION);
    assert_eq!(
        v["command"],
        serde_json::json!(["k3", "report", "1", "0", "3", "--json"])
    );
    assert_eq!(v["result"]["base_change_involution"], "exception");
    assert_eq!(v["result"]["enriques_ns_over"]["conjectural"], true);
    assert!(!v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn class_groups_and_domain_errors() {
    let v = json(&["bqf", "classgroup", "-23"]);
    assert_eq!(v["result"]["class_number"], 3);
    assert_eq!(v["result"]["elements"].as_array().unwrap().len(), 3);
    let out = sk3(&["bqf", "classgroup", "5"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("discriminant"));
    let out = sk3(&["bqf", "classgroup", "5", "--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("5"));
}

#[test]
fn usage_errors() {
    assert_eq!(sk3(&[]).code, 2);
    assert_eq!(sk3(&["bqf", "classgroup", "-23", "--bogus"]).code, 2);
    assert_eq!(sk3(&["frobnicate"]).code, 2);
    assert_eq!(sk3(&["bqf", "reduce", "1", "0"]).code, 2);
    assert_eq!(
        sk3(&[
            "lattice",
            "t-from-ns",
            "--disc",
            "-12",
            "--target",
            "U",
            "--sign",
            "3"
        ])
        .code,
        2
    );
    let help = sk3(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("ellsurf"));
}

#[test]
fn json_round_trip_and_determinism() {
    let a = sk3(&["k3", "report", "2", "1", "3", "--json"]);
    let b = sk3(&["k3", "report", "2", "1", "3", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let r: Report = serde_json::from_str(&a.stdout).unwrap();
    let again: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(r, again);
}

#[test]
fn threads_flag() {
    let v = json(&[
        "bqf",
        "scan",
        "--bound",
        "500",
        "--kind",
        "class-number-one",
        "--threads",
        "2",
    ]);
    assert_eq!(v["result"]["count"], 13);
}

#[test]
fn emitted_inose_model_is_surveyed() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("inose.json");
    let m = model.to_str().unwrap();
    json(&["k3", "inose", "1", "0", "3", "--emit-model", m]);
    let v = json(&["ellsurf", "fibers", m]);
    assert_eq!(
        v["result"]["type_counts"],
        serde_json::json!([["I1", 2], ["I2", 1], ["II*", 2]])
    );
    assert_eq!(v["result"]["euler_sum"], 24);
    // h(-23) = 3: no rational model
    let out = sk3(&["k3", "inose", "2", "1", "3", "--emit-model", m]);
    assert_eq!(out.code, 1);
}

#[test]
fn basechange_writes_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k3.json");
    let src = fixtures_dir().join("models/rational_i6.json");
    json(&[
        "ellsurf",
        "basechange",
        src.to_str().unwrap(),
        "--subst",
        "-8*s^2/(s^2-1)",
        "--out",
        out.to_str().unwrap(),
    ]);
    let expected = fs::read_to_string(fixtures_dir().join("models/k3_base_change.json")).unwrap();
    assert_eq!(fs::read_to_string(out).unwrap(), expected);
}

#[test]
fn full_fixture_corpus_passes() {
    let d = fixtures_dir();
    let out = sk3(&["fixtures", "run", "--dir", d.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn perturbed_fixture_fails_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let src = fixtures_dir();
    fs::create_dir(dir.path().join("models")).unwrap();
    for e in fs::read_dir(src.join("models")).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, dir.path().join("models").join(p.file_name().unwrap())).unwrap();
    }
    let name = "ellsurf_rational_i6_fibres.json";
    let text = fs::read_to_string(src.join(name)).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["expect"][1]["value"] = serde_json::json!(13);
    fs::write(dir.path().join(name), v.to_string()).unwrap();
    let out = sk3(&["fixtures", "run", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout.contains("FAIL ellsurf_rational_i6_fibres"),
        "{}",
        out.stdout
    );
}

#[test]
fn fixture_usage_and_missing_dir() {
    let d = fixtures_dir();
    let d = d.to_str().unwrap();
    assert_eq!(
        sk3(&["fixtures", "run", "--dir", d, "--filter", ""]).code,
        2
    );
    assert_eq!(
        sk3(&["fixtures", "run", "--dir", d, "--filter", "no-such-fixture"]).code,
        2
    );
    assert_eq!(
        sk3(&["fixtures", "run", "--dir", "/nonexistent/fixtures"]).code,
        1
    );
    let out = sk3(&["fixtures", "run", "--dir", d, "--filter", "bqf_", "--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["failed"], 0);
    assert_eq!(v["result"]["total"], 4);
}

#[test]
fn binary_exit_codes_and_bits_env() {
    let bin = env!("CARGO_BIN_EXE_sk3");
    let st = Command::new(bin)
        .args(["bqf", "classgroup", "-23"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let st = Command::new(bin)
        .args(["bqf", "classgroup", "5"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(1));
    let st = Command::new(bin).args(["bqf", "nope"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    // below the 64-bit floor the precision check refuses
    let out = Command::new(bin)
        .args(["k3", "classpoly", "-12"])
        .env("SK3_BITS", "32")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("precision"));
    let out = Command::new(bin)
        .args(["k3", "classpoly", "-12", "--json"])
        .env("SK3_BITS", "128")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["precision_bits"], 128);
}

#[test]
fn lattice_commands() {
    let v = json(&["lattice", "discform", "U + D4(-1)"]);
    assert_eq!(
        v["result"]["nonzero_q_values"],
        serde_json::json!(["1", "1", "1"])
    );
    let dir = tempfile::tempdir().unwrap();
    let gram = dir.path().join("g.json");
    fs::write(&gram, "[[4, 2], [2, 4]]").unwrap();
    let v = json(&["lattice", "discform", gram.to_str().unwrap()]);
    assert_eq!(v["result"]["smith_invariants"], serde_json::json!([2, 6]));
    // a saved discform report serves as a target
    let rep = dir.path().join("df.json");
    let out = sk3(&["lattice", "discform", "Q(2,2,2)", "--json"]);
    fs::write(&rep, out.stdout).unwrap();
    let v = json(&[
        "lattice",
        "t-from-ns",
        "--disc",
        "-12",
        "--target",
        rep.to_str().unwrap(),
        "--sign",
        "1",
    ]);
    assert_eq!(
        v["result"]["forms"],
        serde_json::json!([{"a": 2, "b": 2, "c": 2}])
    );
}
