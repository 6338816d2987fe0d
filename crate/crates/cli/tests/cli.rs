use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fan-fraisse"));
    c.env_remove("FAN_FRAISSE_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("not JSON: {l:?}: {e}")))
        .collect()
}

fn verify_cert(path: &Path) -> Value {
    let out = run(&["cert", "verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    lines(&out).pop().unwrap()
}

#[test]
fn chain_count_matches_documented_example() {
    let out = run(&["chains", "count", "--branches", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"count":3}"#);
}

#[test]
fn chain_count_listing_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("count.json");
    let out = run(&["chains", "count", "--branches", "2,2", "--list", "--out", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let ls = lines(&out);
    assert_eq!(ls.iter().filter(|l| l.get("order").is_some()).count(), 6);
    assert!(ls.iter().any(|l| l["count"] == 6));
    assert_eq!(verify_cert(&cert)["verified"], true);
}

#[test]
fn output_is_deterministic() {
    let args = ["--seed", "9", "expansion", "--branches", "1,1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn epis_respect_mode() {
    let sym = lines(&run(&["fans", "epis", "--source", "2", "--target", "1"]));
    let dir = lines(&run(&["--mode", "directed", "fans", "epis", "--source", "2", "--target", "1"]));
    assert_eq!(sym.last().unwrap()["count"], 3);
    assert!(dir.last().unwrap()["count"].as_u64().unwrap() <= 3);
}

#[test]
fn duality_and_amalgam_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("d.json");
    let out = run(&[
        "duality", "verify", "--source", "1,1", "--target", "1", "--map", "0,1,1", "--out", d.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(verify_cert(&d)["kind"], "duality");

    let a = dir.path().join("a.json");
    let out = run(&[
        "--mode", "directed", "amalgamate", "--a", "1", "--b", "2", "--d", "1,1", "--f", "0,1,1", "--g", "0,1,1", "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(verify_cert(&a)["kind"], "amalgam");
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("count.json");
    run(&["chains", "count", "--branches", "3,1", "--out", cert.to_str().unwrap()]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["witness"]["count"] = 5.into();
    std::fs::write(&cert, v.to_string()).unwrap();
    let out = run(&["cert", "verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[0]["verified"], false);
}

#[test]
fn gr_bracket_exits_with_budget_code() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("gr.json");
    let out = run(&["ramsey", "gr", "--k", "2", "--l", "3", "--r", "2", "--n-max", "5", "--out", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let first = &lines(&out)[0];
    assert_eq!(first["lower_bound"], 6);
    assert!(first["exact"].is_null());
    assert_eq!(verify_cert(&cert)["verdict"], "bracket");
}

#[test]
fn lelek_number_is_exact() {
    let out = run(&["ramsey", "fin", "--d", "1", "--m", "2", "--k", "1", "--l", "1", "--r", "2", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["exact"], 5);
}

#[test]
fn fan_ramsey_small_instances() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("f.json");
    let out = run(&[
        "ramsey", "fan", "--S", "1", "--T", "1", "--r", "2", "--paper-exact", "--exhaustive", "--out", cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[1]["verdict"], "proven");
    assert_eq!(verify_cert(&cert)["verdict"], "proven");

    // a U that is too small has an escaping colouring
    let out = run(&["ramsey", "fan", "--S", "1", "--T", "1,1", "--r", "2", "--n", "2", "--N", "1", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[1]["verdict"], "refuted");
}

#[test]
fn fan_ramsey_colouring_file() {
    let dir = tempfile::tempdir().unwrap();
    let col = dir.path().join("col.json");
    // S = [1], U = [1]: a single map
    std::fs::write(&col, r#"{"r": 2, "colours": [1]}"#).unwrap();
    let out = run(&[
        "ramsey", "fan", "--S", "1", "--T", "1", "--r", "2", "--n", "1", "--N", "1", "--coloring", col.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out)[1]["colour"], 1);

    std::fs::write(&col, r#"{"r": 2, "colours": [1, 0]}"#).unwrap();
    let out = run(&[
        "ramsey", "fan", "--S", "1", "--T", "1", "--r", "2", "--n", "1", "--N", "1", "--coloring", col.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn nakr_random_instance() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("n.json");
    let out = run(&["--mode", "directed", "--seed", "4", "nakr", "--random", "--out", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out)[0]["equal_images"], true);
    assert_eq!(verify_cert(&cert)["kind"], "nakr");
}

#[test]
fn nakr_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, v: Value| {
        let p = dir.path().join(name);
        std::fs::write(&p, v.to_string()).unwrap();
        p.to_str().unwrap().to_string()
    };
    let phi = write(
        "phi.json",
        serde_json::json!({"source": {"branches": [6]}, "target": {"branches": [1]}, "map": [0, 0, 0, 0, 0, 0, 1]}),
    );
    let c = write("c.json", serde_json::json!({"fan": {"branches": [6]}, "order": [0, 1, 2, 3, 4, 5, 6]}));
    let out = run(&["nakr", "--phi", &phi, "--chainC", &c, "--chainD", &c]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out)[0]["psi"], serde_json::json!([0, 0, 0, 0, 0, 0, 1]));

    // two tops reached in opposite orders cannot be merged
    let mut map = vec![0; 17];
    map[8] = 1;
    map[16] = 2;
    let phi = write(
        "phi2.json",
        serde_json::json!({"source": {"branches": [8, 8]}, "target": {"branches": [1, 1]}, "map": map, "mode": "directed"}),
    );
    let base: Vec<usize> = (0..8).chain(9..16).collect();
    let (c_order, d_order) = ([base.clone(), vec![8, 16]].concat(), [base, vec![16, 8]].concat());
    let c = write("c2.json", serde_json::json!({"fan": {"branches": [8, 8]}, "order": c_order}));
    let d = write("d2.json", serde_json::json!({"fan": {"branches": [8, 8]}, "order": d_order}));
    let out = run(&["nakr", "--phi", &phi, "--chain-c", &c, "--chain-d", &d, "--search-limit", "20"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generic_build_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["--mode", "directed", "generic", "build", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let seq = String::from_utf8_lossy(&out.stdout).lines().next().unwrap().to_string();
    let path = dir.path().join("seq.json");
    std::fs::write(&path, seq).unwrap();
    let out = run(&["--mode", "directed", "generic", "check", "--input", path.to_str().unwrap(), "--up-to-level", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["pass"], true);
}

#[test]
fn fin_commands() {
    let out = run(&["fin", "tetris", "--i", "1", "--values", "0,2,1,2"]);
    assert_eq!(lines(&out)[0]["values"], serde_json::json!([0, 1, 0, 1]));
    let out = run(&["fin", "semigroup", "--k", "1", "--l", "2", "--entries", "2,1,0,0;0,0,2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out).last().unwrap()["count"], 8);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["bogus"]).status.code(), Some(64));
    assert_eq!(run(&["chains", "count", "--branches", "x"]).status.code(), Some(64));
    assert_eq!(run(&["--mode", "sideways", "chains", "count", "--branches", "1"]).status.code(), Some(64));
    // order that is not a linear extension
    assert_eq!(run(&["coinitial", "--branches", "1,2", "--order", "0,3,1,2"]).status.code(), Some(64));
    assert_eq!(run(&["ramsey", "fin", "--d", "1", "--m", "1", "--k", "2", "--l", "1", "--r", "2", "--n", "3"]).status.code(), Some(64));
}

#[test]
fn budget_from_environment() {
    let out = bin()
        .env("FAN_FRAISSE_BUDGET", "10")
        .args(["ramsey", "gr", "--k", "2", "--l", "3", "--r", "2", "--n-max", "6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let first = &lines(&out)[0];
    assert!(first["exact"].is_null());
}

#[test]
fn in_process_run_collects_output() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = fan_fraisse_cli::run(["fan-fraisse", "chains", "count", "--branches", "1,1,1"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().trim(), r#"{"count":6}"#);
}
