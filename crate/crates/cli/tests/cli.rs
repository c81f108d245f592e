use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lefschetz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz"))
        .args(args)
        .env_remove("LEFSCHETZ_SEED")
        .env_remove("LEFSCHETZ_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn squares_have_wlp() {
    let out = lefschetz(&["wlp", "--preset", "squares-ci", "--r", "3", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verdict"], "holds");
    assert_eq!(report["meta"]["command"], "wlp");
}

#[test]
fn cubes_example_fails_with_exit_two() {
    let out = lefschetz(&["wlp", "--preset", "cubes-example", "--output", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert_eq!(report["verdict"], "fails");
    let bad: Vec<_> = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["maximal"] == false)
        .map(|r| r["i"].as_u64().unwrap())
        .collect();
    assert_eq!(bad, [4]);
}

#[test]
fn errors_exit_one() {
    assert_eq!(lefschetz(&["oracle", "no_such_table"]).status.code(), Some(1));
    assert_eq!(lefschetz(&["wlp", "--no-such-flag"]).status.code(), Some(1));
    let out = lefschetz(&["hilbert", "--spec", r#"{"vars": 2, "generators": [}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":1:"));
    assert_eq!(lefschetz(&["verify-hss", "--r-max", "14"]).status.code(), Some(1));
    assert_eq!(lefschetz(&["apolar", "--r", "10"]).status.code(), Some(1));
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = ["verify-hss", "--r-min", "2", "--r-max", "7", "--output", "json"];
    let a = lefschetz(&args);
    let b = lefschetz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["certified"], true);
    let wlp: Vec<_> = report["records"].as_array().unwrap().iter().map(|r| r["wlp"].clone()).collect();
    assert_eq!(wlp, ["holds", "holds", "holds", "holds", "fails", "holds"]);
}

#[test]
fn cache_hit_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["--cache-dir", cache, "hilbert", "--preset", "linked", "--r", "6", "--output", "json"];
    let first = lefschetz(&args);
    let stats = lefschetz(&["--cache-dir", cache, "cache", "stats"]);
    assert!(String::from_utf8_lossy(&stats.stdout).contains(": 1 entries"));
    let second = lefschetz(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(lefschetz(&["--cache-dir", cache, "cache", "clear"]).status.code(), Some(0));
    let stats = lefschetz(&["--cache-dir", cache, "cache", "stats"]);
    assert!(String::from_utf8_lossy(&stats.stdout).contains(": 0 entries"));
}

#[test]
fn spec_from_file_and_stdin() {
    let spec = r#"{"vars": 3, "generators": [
        {"power_of_linear": {"coeffs": [1, 0, 0], "exp": 2}},
        {"power_of_linear": {"coeffs": [0, 1, 0], "exp": 2}},
        {"power_of_linear": {"coeffs": [0, 0, 1], "exp": 2}}
    ]}"#;
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(spec.as_bytes()).unwrap();
    let out = lefschetz(&["hilbert", "--spec", file.path().to_str().unwrap(), "--certify", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let dims: Vec<_> = report["records"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 3, 3, 1]);
    assert_eq!(report["certified"], true);

    let mut child = Command::new(env!("CARGO_BIN_EXE_lefschetz"))
        .args(["wlp", "--spec", "-", "--output", "csv"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(spec.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("dim_cur,dim_prev,i,max_possible,maximal,rank,residual_dim\n"));
}

#[test]
fn apolar_report_confirms_everything() {
    let out = lefschetz(&["apolar", "--r", "6", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verdict"], "ok");
    let hg: Vec<_> = report["records"].as_array().unwrap().iter().map(|r| r["h_g"].as_u64().unwrap()).collect();
    assert_eq!(hg, [1, 6, 15, 6, 1, 0, 0]);
}

#[test]
fn oracle_tables() {
    let out = lefschetz(&["oracle", "hf_acm_squares", "--r", "7", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["records"][0]["values"], serde_json::json!([1, 7, 20, 28, 14]));
    let out = lefschetz(&["oracle", "inequality", "--q-min", "4", "--q-max", "50"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn probe_three_variables_holds() {
    let out = lefschetz(&["probe", "--r", "3", "--exponents", "4,4,4,4,4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: holds"));
}

#[test]
fn seed_is_recorded() {
    let out = lefschetz(&["--seed", "42", "hilbert", "--preset", "general-squares", "--r", "4", "--output", "json"]);
    let report = json(&out);
    assert_eq!(report["meta"]["seed"], 42);
    assert_eq!(report["meta"]["primes"].as_array().unwrap().len(), 3);
}
