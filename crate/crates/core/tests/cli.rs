use std::path::PathBuf;
use std::process::{Command, Output};

use ntplus::ScanReport;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntplus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/b005382.txt")
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["eval", "0"]), 2);
    assert_eq!(code(&["scan", "--condition", "nope", "--max", "10"]), 2);
    assert_eq!(code(&["scan", "--condition", "lehmer", "--min", "20", "--max", "10"]), 2);
    assert_eq!(code(&["conjecture", "--q", "4", "--max", "100"]), 2);
    assert_eq!(code(&["verify", "--theorem", "nope"]), 2);
    assert_eq!(code(&["verify", "--theorem", "pq-sigma", "--max", "3"]), 2);
}

#[test]
fn bfile_exit_codes() {
    assert_eq!(code(&["oeis", "--bfile", "/nonexistent/b.txt", "--max-p", "100"]), 3);
    let good = fixture();
    assert_eq!(code(&["oeis", "--bfile", good.to_str().unwrap(), "--max-p", "10000"]), 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("b.txt");
    std::fs::write(&bad, "1 2\n2 3\n3 5\n4 19\n").unwrap();
    assert_eq!(code(&["oeis", "--bfile", bad.to_str().unwrap(), "--max-p", "100"]), 1);

    std::fs::write(&bad, "1 2\nnot a line\n").unwrap();
    assert_eq!(code(&["oeis", "--bfile", bad.to_str().unwrap(), "--max-p", "100"]), 3);
}

#[test]
fn eval_reports_every_function() {
    let v: Value = serde_json::from_str(&stdout(&["eval", "20"])).unwrap();
    assert_eq!(v["sigma"], 42);
    assert_eq!(v["phi"], 8);
    assert_eq!(v["schemmel2"], 0);
    assert_eq!(v["sigma_plus"], 56);
    assert_eq!(v["phi_plus"], 15);
    assert_eq!(v["abundancy"], "21/10");
    assert_eq!(v["omega"], 2);

    let v: Value = serde_json::from_str(&stdout(&["eval", "18446744073709551615"])).unwrap();
    assert_eq!(v["n"], u64::MAX);
    assert!(v["sigma"].is_string(), "values past 64 bits are strings");
}

#[test]
fn scan_json_round_trips() {
    let text = stdout(&["scan", "--condition", "sigma-shift", "--max", "100", "--composite-only"]);
    let report: ScanReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.witness_ns(), [20]);
    assert_eq!(report.witnesses[0].int("k"), Some(2));
    assert_eq!(report.witnesses[0].int("sigma"), Some(42));
    assert_eq!(report.range, (2, 100));
    assert_eq!(report.params["condition"], "sigma-shift");
    assert!(!report.params.contains_key("workers"));
}

#[test]
fn scan_csv_columns() {
    let text = stdout(&[
        "scan", "--condition", "sigma-shift", "--max", "100", "--composite-only", "--format", "csv",
    ]);
    assert_eq!(text, "n,condition,k,sigma\n20,sigma_shift,2,42\n");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let printed = stdout(&["scan", "--condition", "phi-plus-shift", "--max", "1000", "--out", path.to_str().unwrap()]);
    assert!(printed.trim().is_empty());
    let report: ScanReport = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(report.witness_ns(), [4]);
}

#[test]
fn verify_outcomes() {
    let v: Value = serde_json::from_str(&stdout(&["verify", "--theorem", "p2q-sigma", "--max", "1000"])).unwrap();
    assert_eq!(v["witnesses"][0]["n"], 20);
    for t in ["pq-sigma", "pq-sigma-plus", "squarefree-phi-plus", "prime-power-phi-plus", "sigma-plus-bounds"] {
        let v: Value = serde_json::from_str(&stdout(&["verify", "--theorem", t, "--max", "10000"])).unwrap();
        assert_eq!(v["witnesses"].as_array().unwrap().len(), 0, "{t}");
    }
    let v: Value =
        serde_json::from_str(&stdout(&["verify", "--theorem", "phi-plus-bounds", "--max", "10000"])).unwrap();
    assert_eq!(v["witnesses"][0]["n"], 4);
    assert_eq!(v["notes"].as_array().unwrap().len(), 1);
}

#[test]
fn collisions_and_progressions() {
    let text = stdout(&["collisions", "--function", "phi-plus", "--max", "200", "--format", "csv"]);
    assert!(text.lines().any(|l| l.starts_with("35,") && l.contains("35 45")), "{text}");

    let v: Value =
        serde_json::from_str(&stdout(&["aps", "--function", "phi-plus", "--max", "143", "--limit", "100000"]))
            .unwrap();
    let triples = v["triples"].as_array().unwrap();
    assert!(triples.iter().any(|t| t["a"] == 39 && t["b"] == 91 && t["c"] == 143));

    let text = stdout(&["aps", "--function", "sigma-plus", "--families", "k=1..5", "--format", "csv"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().filter(|r| r.starts_with("sigma_plus_ap,")).all(|r| r.ends_with(",true")));
    assert!(rows.iter().filter(|r| r.starts_with("sigma_plus_ap_variant,")).all(|r| r.ends_with(",false")));
    assert!(rows.contains(&"sigma_plus_ap,1,2 8 10,4 16 28,true"));
}

#[test]
fn conjecture_and_ascent() {
    let v: Value =
        serde_json::from_str(&stdout(&["conjecture", "--function", "sigma-plus", "--q", "3", "--max", "100"]))
            .unwrap();
    let ws = v["witnesses"].as_array().unwrap();
    assert!(ws.iter().any(|w| w["n"] == 5 && w["values"]["p"] == 5));
    assert!(ws.iter().any(|w| w["n"] == 15 && w["values"]["p"] == 19));

    assert_eq!(code(&["ascent", "--max-p", "1000"]), 0);
}
