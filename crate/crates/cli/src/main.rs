use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weil_core::scan::{
    cmd_spectrum, cmd_tower, export_csv, run_scan, run_suite, verify_suites, ScanConfig,
    VerifyScope,
};
use weil_core::weil_engine::{canonical_exponent_classes, FieldContext};
use weil_core::Error;

const SUCCESS: u8 = 0;
const CHECK_FAILURE: u8 = 1;
const USAGE_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "weilscan", version, about = "Exact Weil sum spectra of binomials over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum of one exponent with every per-instance check, as JSON.
    Spectrum(SpectrumArgs),
    /// Exhaustive scan over fields and exponent classes, as JSON lines.
    Scan(ScanArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Subfield valuation checks for one exponent (or every class).
    Tower(TowerArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, default_value = "auto")]
    method: String,
    /// Recompute this many random u by direct summation.
    #[arg(long, default_value_t = 0)]
    audit: usize,
}

#[derive(Args)]
struct ScanArgs {
    /// Plain key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Primes, e.g. `2,3`.
    #[arg(long)]
    p: Option<String>,
    /// Degrees, e.g. `2,4,8` or `1-6`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    qmax: Option<u64>,
    /// all | three_valued | nondegenerate
    #[arg(long)]
    filter: Option<String>,
    /// naive | fast | auto
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output file; resumed if it exists. Standard output otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    audit: Option<usize>,
    /// Also write a CSV summary table of the records in `--out`.
    #[arg(long, requires = "out")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// algebra | moments | congruence | towers | valuation | all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 81)]
    qmax: u64,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Args)]
struct TowerArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: u32,
    /// Exponent; every class when omitted.
    #[arg(long, allow_hyphen_values = true)]
    d: Option<i64>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::InexactDivision(_) => CHECK_FAILURE,
        _ => USAGE_ERROR,
    }
}

fn seed() -> Result<u64, Error> {
    match std::env::var("WEILSCAN_SEED") {
        Ok(s) => s
            .parse()
            .map_err(|_| Error::Config(format!("WEILSCAN_SEED is not an integer: '{s}'"))),
        Err(_) => Ok(0),
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string(v)?)?;
    Ok(())
}

fn spectrum(a: SpectrumArgs) -> Result<u8, Error> {
    let record = cmd_spectrum(a.p, a.n, a.d, &a.method, a.audit, seed()?)?;
    print_json(&record)?;
    if record.all_pass() {
        Ok(SUCCESS)
    } else {
        log::error!("checks failed for p={} n={} d={}", a.p, a.n, record.d);
        Ok(CHECK_FAILURE)
    }
}

fn scan(a: ScanArgs) -> Result<u8, Error> {
    let mut cfg = match &a.config {
        Some(path) => ScanConfig::from_kv(&fs::read_to_string(path)?)?,
        None => ScanConfig::default(),
    };
    cfg.seed = seed()?;
    let overrides = [
        ("p", a.p),
        ("n", a.n),
        ("qmax", a.qmax.map(|v| v.to_string())),
        ("filter", a.filter),
        ("method", a.method),
        ("workers", a.workers.map(|v| v.to_string())),
        ("audit", a.audit.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    if a.out.is_some() {
        cfg.output_path = a.out;
    }
    let summary = run_scan(&cfg)?;
    log::info!(
        "scan finished: {} records written, {} reused, {} three-valued, {} failing",
        summary.records_written,
        summary.records_skipped,
        summary.three_valued(),
        summary.failed_checks()
    );
    if let Some(path) = &cfg.output_path {
        if let Some(csv) = &a.csv {
            let rows = export_csv(&fs::read_to_string(path)?, fs::File::create(csv)?)?;
            log::info!("wrote {rows} rows to {}", csv.display());
        }
        print_json(&summary)?;
    }
    Ok(if summary.failed_checks() == 0 { SUCCESS } else { CHECK_FAILURE })
}

fn verify(a: VerifyArgs) -> Result<u8, Error> {
    if a.suite != "all" && verify_suites().get(&a.suite).is_err() {
        let mut known = verify_suites().names();
        known.push("all");
        return Err(Error::UnknownName {
            kind: "verify suite",
            name: a.suite,
            known: known.join(", "),
        });
    }
    let scope = VerifyScope {
        q_max: a.qmax,
        p: a.p,
        n: a.n,
    };
    let outcome = run_suite(&a.suite, &scope)?;
    print_json(&outcome)?;
    if outcome.pass() {
        Ok(SUCCESS)
    } else {
        if let Some(w) = &outcome.first_failure {
            eprintln!("first counterexample: {w}");
        }
        Ok(CHECK_FAILURE)
    }
}

fn tower(a: TowerArgs) -> Result<u8, Error> {
    let ds: Vec<i64> = match a.d {
        Some(d) => vec![d],
        None => {
            let ctx = FieldContext::build(a.p, a.n)?;
            canonical_exponent_classes(a.p, ctx.field().order() as u64)
                .into_iter()
                .map(|d| d as i64)
                .collect()
        }
    };
    let mut all = true;
    for d in ds {
        let report = cmd_tower(a.p, a.n, d)?;
        all &= report.pass();
        print_json(&report)?;
    }
    Ok(if all { SUCCESS } else { CHECK_FAILURE })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Scan(a) => scan(a),
        Command::Verify(a) => verify(a),
        Command::Tower(a) => tower(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
