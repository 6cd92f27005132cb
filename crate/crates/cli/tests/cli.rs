use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn weilscan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilscan"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout is JSON lines"))
        .collect()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn spectrum_of_f32_d13() {
    let out = weilscan(&["spectrum", "--p", "2", "--n", "5", "--d", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_lines(&out)[0];
    assert_eq!(r["three_valued"], true);
    let values: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e[0].as_str().unwrap()).collect();
    assert_eq!(values, vec!["-8", "0", "8"]);
    assert_eq!(r["report"]["celine_case"], "case_i");
}

#[test]
fn spectrum_of_degenerate_exponent() {
    let out = weilscan(&["spectrum", "--p", "3", "--n", "2", "--d", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["degenerate"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    let out = weilscan(&["spectrum", "--p", "3", "--n", "2", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not coprime"));
    assert_eq!(weilscan(&["spectrum", "--p", "4", "--n", "1", "--d", "1"]).status.code(), Some(2));
    assert_eq!(weilscan(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(weilscan(&["scan", "--method", "slow", "--qmax", "8"]).status.code(), Some(2));
    assert_eq!(weilscan(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn spectrum_is_deterministic() {
    let args = ["spectrum", "--p", "2", "--n", "7", "--d", "5", "--method", "fast", "--audit", "5"];
    let a = without_timing(json_lines(&weilscan(&args))[0].clone());
    let b = without_timing(json_lines(&weilscan(&args))[0].clone());
    assert_eq!(a, b);
    assert_eq!(a["checks"]["audit"]["pass"], true);
}

#[test]
fn verify_suites_pass() {
    for suite in ["algebra", "moments", "congruence", "valuation"] {
        let out = weilscan(&["verify", "--suite", suite, "--qmax", "32"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        assert_eq!(json_lines(&out)[0]["failures"], 0);
    }
    let out = weilscan(&["verify", "--suite", "towers", "--p", "3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tower_reports() {
    let out = weilscan(&["tower", "--p", "3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 8);
    for r in &reports {
        if r["levels"][2]["degenerate"] == false {
            assert_eq!(r["dorothy"]["bound_holds"], true);
            assert!(r["dorothy"]["step"].is_array());
        }
    }
    let r = &json_lines(&weilscan(&["tower", "--p", "2", "--n", "3", "--d", "3"]))[0];
    assert_eq!(r["george"].as_array().unwrap().len(), 1);
    assert!(r["dorothy"].is_null());
}

#[test]
fn scan_with_config_file_resume_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scan.jsonl");
    let csv_path = dir.path().join("scan.csv");
    let cfg_path = dir.path().join("scan.conf");
    fs::write(&cfg_path, "p = 2\nn = 3,5\nqmax = 64\nworkers = 1\n").unwrap();
    let cfg = cfg_path.to_str().unwrap();
    let out = out_path.to_str().unwrap();

    let run = weilscan(&["scan", "--config", cfg, "--workers", "4", "--out", out, "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let full = fs::read_to_string(&out_path).unwrap();
    let full_lines: Vec<Value> = full.lines().map(|l| without_timing(serde_json::from_str(l).unwrap())).collect();
    assert!(full_lines.iter().any(|v| v["kind"] == "record" && v["n"] == 5 && v["d"] == 11));
    assert!(fs::read_to_string(&csv_path).unwrap().lines().count() > 1);

    // Interrupt after four lines plus a torn fifth, then resume.
    let torn: String = full.lines().take(4).map(|l| format!("{l}\n")).collect::<String>() + "{\"kind\":\"rec";
    fs::write(&out_path, torn).unwrap();
    let resumed = weilscan(&["scan", "--config", cfg, "--out", out]);
    assert_eq!(resumed.status.code(), Some(0));
    let summary = &json_lines(&resumed)[0];
    assert_eq!(summary["records_skipped"], 3);
    let again: Vec<Value> = fs::read_to_string(&out_path)
        .unwrap()
        .lines()
        .map(|l| without_timing(serde_json::from_str(l).unwrap()))
        .collect();
    assert_eq!(again, full_lines);
}

#[test]
fn scan_to_stdout_with_filter() {
    let out = weilscan(&["scan", "--p", "2", "--n", "5", "--filter", "three_valued"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert!(lines.iter().filter(|v| v["kind"] == "record").all(|v| v["three_valued"] == true));
    assert_eq!(lines.last().unwrap()["kind"], "field_summary");
}
