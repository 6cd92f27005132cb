use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{evaluate, Filter, ScanConfig, ScanRecord};
use crate::error::{Error, Result};
use crate::weil_engine::{canonical_exponent_classes, FieldContext};
use crate::ENGINE_VERSION;

/// Trailing line written after every record of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSummary {
    pub kind: String,
    pub p: u32,
    pub n: u32,
    pub q: u64,
    pub classes: usize,
    pub three_valued: usize,
    pub three_valued_classes: Vec<u64>,
    pub failed_checks: usize,
    pub engine_version: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanSummary {
    pub fields: Vec<FieldSummary>,
    pub records_written: usize,
    pub records_skipped: usize,
}

impl ScanSummary {
    pub fn three_valued(&self) -> usize {
        self.fields.iter().map(|f| f.three_valued).sum()
    }

    pub fn failed_checks(&self) -> usize {
        self.fields.iter().map(|f| f.failed_checks).sum()
    }
}

/// What an earlier, possibly interrupted run already wrote.
#[derive(Clone, Debug, Default)]
pub struct ResumeState {
    /// `(p, n) → [(d, three_valued, all_pass)]`.
    pub records: BTreeMap<(u32, u32), Vec<(u64, bool, bool)>>,
    pub finished: BTreeMap<(u32, u32), FieldSummary>,
}

impl ResumeState {
    /// Parses complete lines of earlier output.
    pub fn from_lines(text: &str) -> Result<Self> {
        let mut state = Self::default();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v: Value = serde_json::from_str(line)
                .map_err(|e| Error::Config(format!("output line {}: {e}", i + 1)))?;
            let key = |name: &str| v[name].as_u64().map(|x| x as u32);
            let (Some(p), Some(n)) = (key("p"), key("n")) else {
                return Err(Error::Config(format!("output line {}: missing p or n", i + 1)));
            };
            match v["kind"].as_str() {
                Some("record") => {
                    let d = v["d"].as_u64().unwrap_or(0);
                    let tv = v["three_valued"].as_bool().unwrap_or(false);
                    let pass = record_passes(&v);
                    state.records.entry((p, n)).or_default().push((d, tv, pass));
                }
                Some("field_summary") => {
                    let s: FieldSummary = serde_json::from_value(v)?;
                    state.finished.insert((p, n), s);
                }
                _ => return Err(Error::Config(format!("output line {}: unknown kind", i + 1))),
            }
        }
        Ok(state)
    }
}

fn record_passes(v: &Value) -> bool {
    let all = |checks: &Value| {
        checks
            .as_object()
            .is_none_or(|m| m.values().all(|c| c["pass"].as_bool().unwrap_or(false)))
    };
    all(&v["checks"]) && all(&v["report"]["checks"])
}

fn keep(filter: Filter, r: &ScanRecord) -> bool {
    match filter {
        Filter::All => true,
        Filter::ThreeValued => r.three_valued,
        Filter::Nondegenerate => !r.degenerate,
    }
}

/// Runs the scan, appending JSON lines to `out` and skipping work recorded in `resume`.
pub fn scan_to_writer(cfg: &ScanConfig, out: &mut dyn Write, resume: &ResumeState) -> Result<ScanSummary> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut summary = ScanSummary::default();
    for (p, n) in cfg.fields() {
        if let Some(done) = resume.finished.get(&(p, n)) {
            log::info!("F_{p}^{n}: already complete, skipping");
            summary.records_skipped += done.classes;
            summary.fields.push(done.clone());
            continue;
        }
        let ctx = FieldContext::build(p, n)?;
        let q = ctx.field().order() as u64;
        let classes = canonical_exponent_classes(p, q);
        let prior = resume.records.get(&(p, n)).cloned().unwrap_or_default();
        let prior_ds: BTreeSet<u64> = prior.iter().map(|r| r.0).collect();
        let todo: Vec<u64> = classes.iter().copied().filter(|d| !prior_ds.contains(d)).collect();
        log::info!(
            "F_{p}^{n}: {} classes, {} to compute",
            classes.len(),
            todo.len()
        );
        summary.records_skipped += prior.len();

        let mut three_valued: Vec<u64> = prior.iter().filter(|r| r.1).map(|r| r.0).collect();
        let mut failed = prior.iter().filter(|r| !r.2).count();
        let chunk_len = (cfg.workers * 8).max(1);
        for chunk in todo.chunks(chunk_len) {
            let records: Vec<Result<ScanRecord>> = pool.install(|| {
                chunk
                    .par_iter()
                    .map(|&d| evaluate(&ctx, d as i64, &cfg.method, cfg.audit, cfg.seed))
                    .collect()
            });
            for r in records {
                let r = r?;
                if r.three_valued {
                    three_valued.push(r.d);
                }
                if !r.all_pass() {
                    log::warn!("F_{p}^{n} d={}: check failure", r.d);
                    failed += 1;
                }
                if keep(cfg.filter, &r) {
                    writeln!(out, "{}", r.to_json_line())?;
                    summary.records_written += 1;
                }
            }
            out.flush()?;
        }
        three_valued.sort_unstable();
        let field = FieldSummary {
            kind: "field_summary".into(),
            p,
            n,
            q,
            classes: classes.len(),
            three_valued: three_valued.len(),
            three_valued_classes: three_valued,
            failed_checks: failed,
            engine_version: ENGINE_VERSION.into(),
        };
        writeln!(out, "{}", serde_json::to_string(&field)?)?;
        out.flush()?;
        log::info!(
            "F_{p}^{n}: done, {} three-valued, {} failing",
            field.three_valued,
            field.failed_checks
        );
        summary.fields.push(field);
    }
    Ok(summary)
}

/// Opens `path` for appending after dropping an unterminated last line, and
/// returns what the complete lines already cover.
pub fn open_for_resume(path: &Path) -> Result<(File, ResumeState)> {
    let mut text = String::new();
    if path.exists() {
        File::open(path)?.read_to_string(&mut text)?;
        let keep_len = text.rfind('\n').map_or(0, |i| i + 1);
        if keep_len < text.len() {
            log::warn!("dropping partial trailing line in {}", path.display());
            text.truncate(keep_len);
            OpenOptions::new().write(true).open(path)?.set_len(keep_len as u64)?;
        }
    }
    let state = ResumeState::from_lines(&text)?;
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    Ok((file, state))
}

/// Scans into `cfg.output_path` (resuming) or standard output.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanSummary> {
    match &cfg.output_path {
        Some(path) => {
            let (file, state) = open_for_resume(path)?;
            let mut w = BufWriter::new(file);
            scan_to_writer(cfg, &mut w, &state)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            scan_to_writer(cfg, &mut w, &ResumeState::default())
        }
    }
}

/// Summary table of the records in a JSON-lines scan output.
pub fn export_csv(jsonl: &str, out: impl Write) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p", "n", "q", "d", "degenerate", "value_count", "three_valued", "min_valuation", "v1", "values",
    ])
    .map_err(csv_error)?;
    let mut rows = 0;
    for line in jsonl.lines().filter(|l| !l.trim().is_empty()) {
        let v: Value = serde_json::from_str(line)?;
        if v["kind"] != "record" {
            continue;
        }
        let values: Vec<String> = v["entries"]
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|e| format!("{}:{}", e[0].as_str().unwrap_or(""), e[1]))
                    .collect()
            })
            .unwrap_or_default();
        let field = |k: &str| match &v[k] {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        w.write_record([
            field("p"),
            field("n"),
            field("q"),
            field("d"),
            field("degenerate"),
            field("value_count"),
            field("three_valued"),
            field("min_valuation"),
            field("v1"),
            values.join(" "),
        ])
        .map_err(csv_error)?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}
