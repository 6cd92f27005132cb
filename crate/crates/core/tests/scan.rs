use std::fs;

use serde_json::Value;
use weil_core::scan::{export_csv, run_scan, scan_to_writer, Filter, ResumeState, ScanConfig};

fn config(workers: usize) -> ScanConfig {
    let mut cfg = ScanConfig::default();
    cfg.set("p", "2,3").unwrap();
    cfg.set("qmax", "81").unwrap();
    cfg.workers = workers;
    cfg
}

/// Lines with the timing field removed.
fn strip_timing(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| {
            let mut v: Value = serde_json::from_str(l).unwrap();
            if let Some(o) = v.as_object_mut() {
                o.remove("timing_ms");
            }
            v
        })
        .collect()
}

fn scan_text(cfg: &ScanConfig) -> String {
    let mut buf = Vec::new();
    scan_to_writer(cfg, &mut buf, &ResumeState::default()).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn output_is_ordered_and_independent_of_workers() {
    let one = scan_text(&config(1));
    let four = scan_text(&config(4));
    assert_eq!(strip_timing(&one), strip_timing(&four));
    assert_eq!(strip_timing(&one), strip_timing(&scan_text(&config(1))));

    let keys: Vec<(u64, u64, u64)> = strip_timing(&one)
        .iter()
        .filter(|v| v["kind"] == "record")
        .map(|v| (v["p"].as_u64().unwrap(), v["n"].as_u64().unwrap(), v["d"].as_u64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn resume_after_interruption_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.jsonl");
    let mut cfg = config(2);
    cfg.output_path = Some(path.clone());

    let full = scan_text(&cfg);
    let lines: Vec<&str> = full.lines().collect();
    for cut in [0, 1, 3, lines.len() / 2, lines.len() - 1] {
        let mut partial: String = lines[..cut].iter().map(|l| format!("{l}\n")).collect();
        // Interrupted in the middle of writing the next line.
        partial.push_str(&lines[cut][..lines[cut].len() / 2]);
        fs::write(&path, partial).unwrap();
        let summary = run_scan(&cfg).unwrap();
        assert_eq!(summary.failed_checks(), 0);
        let resumed = fs::read_to_string(&path).unwrap();
        assert_eq!(strip_timing(&resumed), strip_timing(&full), "cut at line {cut}");
    }

    // A second run over finished output writes nothing.
    let before = fs::read_to_string(&path).unwrap();
    let summary = run_scan(&cfg).unwrap();
    assert_eq!(summary.records_written, 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), before);
}

#[test]
fn filters_and_summaries() {
    let mut cfg = ScanConfig::default();
    cfg.set("p", "2").unwrap();
    cfg.set("n", "4,5").unwrap();
    cfg.filter = Filter::ThreeValued;
    let text = scan_text(&cfg);
    let lines = strip_timing(&text);
    let records: Vec<&Value> = lines.iter().filter(|v| v["kind"] == "record").collect();
    assert!(records.iter().all(|r| r["three_valued"] == true));
    assert!(records.iter().any(|r| r["n"] == 5 && r["d"] == 11));
    let summaries: Vec<&Value> = lines.iter().filter(|v| v["kind"] == "field_summary").collect();
    assert_eq!(summaries.len(), 2);
    assert_eq!(summaries[0]["three_valued"], 0);
    assert!(summaries[1]["three_valued_classes"]
        .as_array()
        .unwrap()
        .contains(&Value::from(11)));
}

#[test]
fn csv_summary_table() {
    let mut cfg = ScanConfig::default();
    cfg.set("p", "3").unwrap();
    cfg.set("n", "2").unwrap();
    let text = scan_text(&cfg);
    let mut out = Vec::new();
    let rows = export_csv(&text, &mut out).unwrap();
    assert_eq!(rows, 2);
    let csv = String::from_utf8(out).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("p,n,q,d,"));
    assert!(lines.next().unwrap().starts_with("3,2,9,1,true,2,false,"));
}

#[test]
fn corrupt_output_is_rejected() {
    assert!(ResumeState::from_lines("{\"kind\":\"record\"}\n").is_err());
    assert!(ResumeState::from_lines("not json\n").is_err());
}
