use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::analysis::{
    check_barbara, check_degenerate_spectrum, check_gloria, check_helleseth_lower_bound, check_orestes,
    orbit_decomposition, v1_congruence_expected, v_vector, CheckOutcome, Checks, ThreeValuedReport,
};
use crate::cyclotomic::ValuationQ;
use crate::error::Result;
use crate::weil_engine::{
    canonical_exponent, exponent_orbit, inverse_class, resolve_method, weil_sum_naive, weil_values,
    FieldContext,
};
use crate::ENGINE_VERSION;

/// One line of scan output: a spectrum with every per-instance check.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub kind: &'static str,
    pub p: u32,
    pub n: u32,
    pub q: u64,
    pub modulus: Vec<u32>,
    /// Coefficients of the primitive element, constant term first.
    pub generator: Vec<u32>,
    pub d: u64,
    pub orbit: Vec<u64>,
    pub inverse_class: u64,
    pub entries: Vec<(String, u64)>,
    pub degenerate: bool,
    pub value_count: usize,
    pub three_valued: bool,
    pub min_valuation: ValuationQ,
    pub v1: u64,
    pub method: &'static str,
    pub checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ThreeValuedReport>,
    pub engine_version: &'static str,
    pub timing_ms: u64,
}

impl ScanRecord {
    pub fn key(&self) -> (u32, u32, u64) {
        (self.p, self.n, self.d)
    }

    pub fn all_pass(&self) -> bool {
        crate::analysis::all_pass(&self.checks)
            && self.report.as_ref().is_none_or(|r| r.all_pass())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

fn audit_seed(seed: u64, p: u32, n: u32, d: u64) -> u64 {
    seed ^ ((p as u64) << 48) ^ ((n as u64) << 40) ^ d.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Computes the spectrum of `d` over the context's field with every
/// per-instance check. `audit > 0` recomputes that many random `u` by direct
/// summation; the choice of `u` depends only on `seed` and `(p, n, d)`.
pub fn evaluate(ctx: &FieldContext, d: i64, method: &str, audit: usize, seed: u64) -> Result<ScanRecord> {
    let start = Instant::now();
    let t = ctx.field();
    t.require_coprime(d)?;
    let m = t.units() as u64;
    let d = canonical_exponent(d, m);
    let method = resolve_method(method, t.order())?;
    let values = weil_values(ctx, d as i64, method)?;
    let spectrum = values.spectrum();
    let v = v_vector(t, d as i64)?;

    let mut checks = Checks::new();
    checks.insert("gloria".into(), check_gloria(&spectrum));
    checks.insert("orestes".into(), check_orestes(&spectrum, &v));
    let branch = v1_congruence_expected(t, d as i64)?;
    checks.insert("barbara".into(), check_barbara(&v, &branch));
    let orbits = orbit_decomposition(t, d as i64)?;
    checks.insert(
        "orbits".into(),
        CheckOutcome::new(
            orbits.consistent && orbits.v1 == v.v1,
            json!({"orbit_sizes": orbits.orbit_sizes, "short_orbits": orbits.short_orbits}),
        ),
    );
    checks.insert("value_count".into(), check_helleseth_lower_bound(&spectrum));
    if spectrum.degenerate {
        checks.insert("degenerate_spectrum".into(), check_degenerate_spectrum(&spectrum));
    }
    if audit > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(audit_seed(seed, t.p(), t.n(), d));
        let picks = rand::seq::index::sample(&mut rng, m as usize, audit.min(m as usize));
        let mut mismatch = None;
        for i in picks.iter() {
            let direct = weil_sum_naive(t, d as i64, t.exp(i as u64))?;
            if direct != values.value(i) {
                mismatch = Some(json!({"log_index": i, "direct": direct.to_string(), "engine": values.value(i).to_string()}));
                break;
            }
        }
        checks.insert(
            "audit".into(),
            CheckOutcome::new(mismatch.is_none(), json!({"samples": picks.len(), "mismatch": mismatch})),
        );
    }

    let report = if spectrum.is_three_valued() {
        match ThreeValuedReport::from_spectrum(&spectrum) {
            Ok(mut r) => {
                r.run_checks(&spectrum, &v);
                Some(r)
            }
            Err(e) => {
                checks.insert("three_valued_form".into(), CheckOutcome::fail(json!({"error": e.to_string()})));
                None
            }
        }
    } else {
        None
    };
    Ok(finish(ctx, d, method.name(), &spectrum, v.v1, checks, report, start))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    ctx: &FieldContext,
    d: u64,
    method: &'static str,
    spectrum: &crate::weil_engine::WeilSpectrum,
    v1: u64,
    checks: Checks,
    report: Option<ThreeValuedReport>,
    start: Instant,
) -> ScanRecord {
    let t = ctx.field();
    let q = t.order() as u64;
    ScanRecord {
        kind: "record",
        p: t.p(),
        n: t.n(),
        q,
        modulus: t.spec().modulus.clone(),
        generator: t.coeffs(t.generator()),
        d,
        orbit: exponent_orbit(t.p(), q, d as i64),
        inverse_class: inverse_class(t.p(), q, d as i64).expect("d is a unit"),
        entries: spectrum.entries.iter().map(|(v, c)| (v.to_string(), *c)).collect(),
        degenerate: spectrum.degenerate,
        value_count: spectrum.value_count(),
        three_valued: spectrum.is_three_valued(),
        min_valuation: spectrum.min_valuation(),
        v1,
        method,
        checks,
        report,
        engine_version: ENGINE_VERSION,
        timing_ms: start.elapsed().as_millis() as u64,
    }
}
