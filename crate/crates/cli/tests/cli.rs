//! End-to-end tests of the binary surface: exit codes, determinism, and the
//! shape of every output format.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_e7lift"))
}

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn lift_identity_bounds() {
    let out = run(&[
        "lift",
        "--newform",
        &data("data/newforms/11.2.a.json"),
        "--det-bound",
        "1",
        "--trace-bound",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["tool"], "e7lift");
    assert!(header["config_hash"].is_string());
    let row: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(row["det"], "1");
    assert_eq!(row["value"], "1");
    assert_eq!(row["b"]["diag"][0], "1");
    assert!(lines.next().is_none());
}

#[test]
fn lift_missing_tables_is_partial() {
    let out = run(&[
        "lift",
        "--newform",
        &data("data/newforms/11.2.a.json"),
        "--det-bound",
        "2",
        "--trace-bound",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("siegel polynomial unavailable") && stderr.contains("d=1"),
        "stderr names the missing key: {}",
        stderr
    );
}

#[test]
fn lift_with_tables_succeeds_and_depends_only_on_det() {
    let out = run(&[
        "lift",
        "--newform",
        &data("data/newforms/11.2.a.json"),
        "--siegel",
        &data("data/tables/demo.siegel"),
        "--det-bound",
        "2",
        "--trace-bound",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut by_det: std::collections::BTreeMap<String, std::collections::BTreeSet<String>> =
        Default::default();
    let mut rows = 0;
    for line in stdout.lines().skip(1) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("error").is_none(), "row failed: {}", line);
        rows += 1;
        by_det
            .entry(v["det"].as_str().unwrap().to_string())
            .or_default()
            .insert(v["value"].as_str().unwrap().to_string());
    }
    assert_eq!(rows, 1444);
    // provider keys here depend only on the valuation of the determinant, so
    // equal determinants must receive identical values
    for (det, values) in &by_det {
        assert_eq!(values.len(), 1, "det {} got {:?}", det, values);
    }
}

#[test]
fn lift_rejects_bad_newform() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"level": 11, "weight": 3, "character": "trivial",
        "coefficients": ["1"], "atkin_lehner": {"11": -1}}"#)
        .unwrap();
    let out = run(&["lift", "--newform", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("parity"), "stderr: {}", stderr);
}

#[test]
fn lift_output_is_byte_identical_across_runs() {
    let args = [
        "lift",
        "--newform",
        &data("data/newforms/11.2.a.json"),
        "--siegel",
        &data("data/tables/demo.siegel"),
        "--det-bound",
        "2",
        "--trace-bound",
        "4",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_cap_and_lfactors_match() {
    for suite in ["cap", "lfactor-std", "lfactor-ad"] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "suite {}", suite);
        let v: serde_json::Value =
            serde_json::from_slice(&out.stdout).expect("verify emits JSON");
        assert_eq!(v["suites"][0]["status"], "match", "suite {}", suite);
        if suite == "lfactor-std" {
            assert_eq!(v["suites"][0]["central_shift"], "0");
        }
    }
}

#[test]
fn verify_jordan_deterministic_report() {
    let args = ["verify", "--suite", "jordan", "--samples", "200", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed must give identical reports");
}

#[test]
fn verify_gaussian_and_siegel() {
    for suite in ["gaussian", "siegel"] {
        let out = run(&["verify", "--suite", suite, "--seed", "5"]);
        assert_eq!(out.status.code(), Some(0), "suite {}", suite);
    }
}

#[test]
fn lfactor_line_counts() {
    let out = run(&["lfactor", "--which", "ad"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 133);
    assert!(stdout.lines().any(|l| l == "(1 - p^-s)"));

    let out = run(&["lfactor", "--which", "std"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 56);
    assert!(stdout.lines().any(|l| l.contains("alpha^3")));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("central shift: 0"));
}

#[test]
fn lfactor_numeric_at_alpha_one_collapses() {
    let out = run(&[
        "lfactor", "--which", "ad", "--mode", "numeric", "--p", "2", "--alpha", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // with alpha = 1 every factor is zeta-type: coefficients are powers of 2
    for line in stdout.lines() {
        let inner = line
            .trim_start_matches("(1 - (")
            .split(')')
            .next()
            .unwrap();
        let q: f64 = if let Some((n, d)) = inner.split_once('/') {
            n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
        } else {
            inner.parse().unwrap()
        };
        let log = q.log2();
        assert!(
            (log - log.round()).abs() < 1e-9,
            "not a power of two: {}",
            line
        );
    }
}

#[test]
fn config_file_and_table_dir_default() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        format!(
            "newform = {}\ndet_bound = 1\ntrace_bound = 3\nseed = 9\n",
            data("data/newforms/11.2.a.json")
        ),
    )
    .unwrap();
    let out = bin()
        .args(["lift", "--config", conf.to_str().unwrap()])
        .env("E7LIFT_TABLE_DIR", data("data/tables"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // unknown keys are config errors
    std::fs::write(&conf, "does_not_exist = 1\n").unwrap();
    let out = bin()
        .args(["lift", "--config", conf.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // missing referenced files are config errors
    std::fs::write(&conf, "newform = /nonexistent/newform.json\n").unwrap();
    let out = bin()
        .args(["lift", "--config", conf.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn coeff_table_csv() {
    let out = run(&[
        "coeff-table",
        "--newform",
        &data("data/newforms/11.2.a.json"),
        "--max-n",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "n,c_n,bound,pass");
    assert_eq!(lines.len(), 13);
    assert!(lines[1].starts_with("1,\"1\",\"1\",pass"));
    // every row passes the bound on this record
    for row in &lines[1..] {
        assert!(row.ends_with(",pass"), "row: {}", row);
    }
}
