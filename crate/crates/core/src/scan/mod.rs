//! Scans over `(p, n, d)`, single-instance queries, verification suites and
//! persistence for the `weilscan` command line tool.

mod config;
mod record;
mod run;
mod verify;

pub use config::{parse_list, Filter, ScanConfig};
pub use record::{evaluate, ScanRecord};
pub use run::{
    export_csv, open_for_resume, run_scan, scan_to_writer, FieldSummary, ResumeState, ScanSummary,
};
pub use verify::{
    run_suite, verify_suites, AlgebraSuite, CongruenceSuite, MomentsSuite, SuiteOutcome, TowersSuite,
    ValuationSuite, VerifyScope, VerifySuite,
};

use crate::analysis::{tower_checks, TowerReport};
use crate::error::Result;
use crate::weil_engine::FieldContext;

/// Spectrum and per-instance checks for one `(p, n, d)`.
pub fn cmd_spectrum(p: u32, n: u32, d: i64, method: &str, audit: usize, seed: u64) -> Result<ScanRecord> {
    let ctx = FieldContext::build(p, n)?;
    evaluate(&ctx, d, method, audit, seed)
}

pub fn cmd_tower(p: u32, n: u32, d: i64) -> Result<TowerReport> {
    tower_checks(p, n, d)
}
