use std::collections::BTreeMap;
use std::sync::LazyLock;

use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    check_aaron, check_barbara, check_bartholomew, check_gloria, check_orestes, check_theresa,
    check_ursula, check_william, orbit_decomposition, v1_congruence_expected, v_vector, CelineCase,
    CheckOutcome, ThreeValuedReport, Tower,
};
use crate::arith::{checked_pow, is_prime};
use crate::error::{Error, Result};
use crate::group_algebra::FftConvolver;
use crate::registry::{Named, Registry};
use crate::weil_engine::{
    canonical_exponent_classes, resolve_method, weil_values, FastMethod, FieldContext, NaiveMethod,
    SpectrumMethod,
};

/// Which fields a suite runs over.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyScope {
    pub q_max: u64,
    pub p: Option<u32>,
    pub n: Option<u32>,
}

impl Default for VerifyScope {
    fn default() -> Self {
        Self {
            q_max: 81,
            p: None,
            n: None,
        }
    }
}

impl VerifyScope {
    /// `(p, n)` pairs with `p^n ≤ q_max`, narrowed by `p` and `n` when given.
    /// An explicit `(p, n)` pair is used even above `q_max`.
    pub fn fields(&self) -> Result<Vec<(u32, u32)>> {
        if let (Some(p), Some(n)) = (self.p, self.n) {
            if !is_prime(p as u64) {
                return Err(Error::NotPrime(p as u64));
            }
            return Ok(vec![(p, n)]);
        }
        let mut out = Vec::new();
        for p in (2..=self.q_max.min(u32::MAX as u64) as u32).filter(|&p| is_prime(p as u64)) {
            if self.p.is_some_and(|want| want != p) {
                continue;
            }
            for n in 1.. {
                match checked_pow(p as u64, n) {
                    Some(q) if q <= self.q_max => {
                        if self.n.is_none_or(|want| want == n) {
                            out.push((p, n));
                        }
                    }
                    _ => break,
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<Value>,
    /// Named tallies, e.g. congruence branches or three-valued instances seen.
    pub coverage: BTreeMap<String, usize>,
}

impl SuiteOutcome {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.into(),
            checked: 0,
            failures: 0,
            first_failure: None,
            coverage: BTreeMap::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.failures == 0
    }

    pub fn record(&mut self, name: &str, context: Value, outcome: &CheckOutcome) {
        self.checked += 1;
        if !outcome.pass {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(json!({"check": name, "at": context, "witness": outcome.witness}));
            }
        }
    }

    pub fn count(&mut self, key: impl Into<String>) {
        *self.coverage.entry(key.into()).or_default() += 1;
    }

    fn absorb(&mut self, other: SuiteOutcome) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
        for (k, v) in other.coverage {
            *self.coverage.entry(format!("{}.{k}", other.suite)).or_default() += v;
        }
    }
}

pub trait VerifySuite: Named + Send + Sync {
    fn run(&self, scope: &VerifyScope) -> Result<SuiteOutcome>;
}

static SUITES: LazyLock<Registry<dyn VerifySuite>> = LazyLock::new(|| {
    Registry::<dyn VerifySuite>::new("verify suite")
        .with(Box::new(AlgebraSuite))
        .with(Box::new(MomentsSuite))
        .with(Box::new(CongruenceSuite))
        .with(Box::new(TowersSuite))
        .with(Box::new(ValuationSuite))
});

pub fn verify_suites() -> &'static Registry<dyn VerifySuite> {
    &SUITES
}

/// Runs one registered suite, or every suite for `all`.
pub fn run_suite(name: &str, scope: &VerifyScope) -> Result<SuiteOutcome> {
    if name == "all" {
        let mut total = SuiteOutcome::new("all");
        for suite in SUITES.iter() {
            total.absorb(suite.run(scope)?);
        }
        return Ok(total);
    }
    SUITES.get(name)?.run(scope)
}

fn for_each_class(
    scope: &VerifyScope,
    mut f: impl FnMut(&FieldContext, u64) -> Result<()>,
) -> Result<()> {
    for (p, n) in scope.fields()? {
        let ctx = FieldContext::build(p, n)?;
        log::info!("verifying over F_{p}^{n}");
        for d in canonical_exponent_classes(p, ctx.field().order() as u64) {
            f(&ctx, d)?;
        }
    }
    Ok(())
}

fn auto(ctx: &FieldContext) -> Result<&'static dyn SpectrumMethod> {
    resolve_method("auto", ctx.field().order())
}

fn at(ctx: &FieldContext, d: u64) -> Value {
    json!({"p": ctx.field().p(), "n": ctx.field().n(), "d": d})
}

/// Exact group-algebra identities and fast/naive agreement.
pub struct AlgebraSuite;

impl Named for AlgebraSuite {
    fn name(&self) -> &'static str {
        "algebra"
    }
}

impl VerifySuite for AlgebraSuite {
    fn run(&self, scope: &VerifyScope) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new(self.name());
        for_each_class(scope, |ctx, d| {
            let naive = weil_values(ctx, d as i64, &NaiveMethod)?;
            let fast = weil_values(ctx, d as i64, &FastMethod)?;
            let w = naive.to_element();
            let same = match w.first_difference(&fast.to_element()) {
                None => CheckOutcome::pass(Value::Null),
                Some(i) => CheckOutcome::fail(json!({"log_index": i})),
            };
            out.record("fast_equals_naive", at(ctx, d), &same);
            out.record("aaron", at(ctx, d), &check_aaron(&naive, &FftConvolver)?);
            out.record("bartholomew", at(ctx, d), &check_bartholomew(ctx.field(), d as i64, &FftConvolver)?);
            out.record("william", at(ctx, d), &check_william(&w, &FftConvolver)?);
            let v = v_vector(ctx.field(), d as i64)?;
            out.record("ursula", at(ctx, d), &check_ursula(&w, &v, &FftConvolver)?);
            Ok(())
        })?;
        Ok(out)
    }
}

/// The four power moments, and the closed form on three-valued spectra.
pub struct MomentsSuite;

impl Named for MomentsSuite {
    fn name(&self) -> &'static str {
        "moments"
    }
}

impl VerifySuite for MomentsSuite {
    fn run(&self, scope: &VerifyScope) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new(self.name());
        for_each_class(scope, |ctx, d| {
            let s = weil_values(ctx, d as i64, auto(ctx)?)?.spectrum();
            let v = v_vector(ctx.field(), d as i64)?;
            out.record("orestes", at(ctx, d), &check_orestes(&s, &v));
            if s.is_three_valued() {
                out.count("three_valued");
                match ThreeValuedReport::from_spectrum(&s) {
                    Ok(r) => out.record("theresa", at(ctx, d), &check_theresa(&r, &s)?),
                    Err(e) => out.record("theresa", at(ctx, d), &CheckOutcome::fail(json!({"error": e.to_string()}))),
                }
            }
            Ok(())
        })?;
        Ok(out)
    }
}

/// `V_1 mod 6` against the case table, and the orbit structure of its roots.
pub struct CongruenceSuite;

impl Named for CongruenceSuite {
    fn name(&self) -> &'static str {
        "congruence"
    }
}

impl VerifySuite for CongruenceSuite {
    fn run(&self, scope: &VerifyScope) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new(self.name());
        for_each_class(scope, |ctx, d| {
            let t = ctx.field();
            let v = v_vector(t, d as i64)?;
            let branch = v1_congruence_expected(t, d as i64)?;
            out.count(branch.label);
            out.record("barbara", at(ctx, d), &check_barbara(&v, &branch));
            let orbits = orbit_decomposition(t, d as i64)?;
            out.record(
                "orbits",
                at(ctx, d),
                &CheckOutcome::new(
                    orbits.consistent && orbits.v1 == v.v1,
                    json!({"orbit_sizes": orbits.orbit_sizes, "v1": v.v1}),
                ),
            );
            Ok(())
        })?;
        Ok(out)
    }
}

/// Subfield inequalities and equalities for every `n ≥ 2` in scope.
pub struct TowersSuite;

impl Named for TowersSuite {
    fn name(&self) -> &'static str {
        "towers"
    }
}

impl VerifySuite for TowersSuite {
    fn run(&self, scope: &VerifyScope) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new(self.name());
        for (p, n) in scope.fields()?.into_iter().filter(|&(_, n)| n >= 2) {
            let tower = Tower::build(p, n, "auto")?;
            let q = tower.context(n).expect("top level").field().order() as u64;
            for d in canonical_exponent_classes(p, q) {
                let r = tower.checks(d as i64)?;
                let ctx = json!({"p": p, "n": n, "d": d});
                for c in &r.george {
                    out.record("george", ctx.clone(), &CheckOutcome::new(c.pass, json!(c)));
                }
                for c in &r.henry {
                    out.count("henry_steps");
                    out.record("henry", ctx.clone(), &CheckOutcome::new(c.pass, json!(c)));
                }
                for c in &r.trace_composition {
                    out.record("trace_composition", ctx.clone(), &CheckOutcome::new(c.pass, json!(c)));
                }
                if let Some(step) = &r.dorothy {
                    if step.step.is_some() {
                        out.count("quadratic_steps_located");
                    }
                    if !step.three_valued {
                        out.count("dorothy_vacuous");
                    }
                    out.record("dorothy", ctx.clone(), &CheckOutcome::new(step.bound_holds, json!(step)));
                }
            }
        }
        Ok(out)
    }
}

/// Positive valuations everywhere, and the structure of three-valued spectra.
pub struct ValuationSuite;

impl Named for ValuationSuite {
    fn name(&self) -> &'static str {
        "valuation"
    }
}

impl VerifySuite for ValuationSuite {
    fn run(&self, scope: &VerifyScope) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new(self.name());
        for_each_class(scope, |ctx, d| {
            let s = weil_values(ctx, d as i64, auto(ctx)?)?.spectrum();
            out.record("gloria", at(ctx, d), &check_gloria(&s));
            if !s.is_three_valued() {
                return Ok(());
            }
            out.count("three_valued");
            let v = v_vector(ctx.field(), d as i64)?;
            let mut r = match ThreeValuedReport::from_spectrum(&s) {
                Ok(r) => r,
                Err(e) => {
                    let fail = CheckOutcome::fail(json!({"error": e.to_string()}));
                    out.record("three_valued_form", at(ctx, d), &fail);
                    return Ok(());
                }
            };
            r.run_checks(&s, &v);
            for (name, c) in &r.checks {
                out.record(name, at(ctx, d), c);
            }
            if let Some(case) = r.celine_case {
                out.count(match case {
                    CelineCase::CaseI => "case_i",
                    CelineCase::CaseIi => "case_ii",
                });
            }
            Ok(())
        })?;
        Ok(out)
    }
}
