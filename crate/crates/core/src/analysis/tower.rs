use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{divisors, gcd, is_power_of_two};
use crate::cyclotomic::ValuationQ;
use crate::error::{Error, Result};
use crate::ff_core::SubfieldEmbedding;
use crate::weil_engine::{canonical_exponent, resolve_method, weil_values, FieldContext, WeilValues};

/// Minimum `v_p(W_{F,d}(u))` over `u ∈ F*`.
pub fn min_valuation(ctx: &FieldContext, d: i64, method: &str) -> Result<ValuationQ> {
    let m = resolve_method(method, ctx.field().order())?;
    Ok(weil_values(ctx, d, m)?.spectrum().min_valuation())
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerLevel {
    /// Degree of the subfield over `F_p`.
    pub k: u32,
    pub q: u64,
    /// `d` reduced modulo `p^k - 1`.
    pub d: u64,
    pub valid: bool,
    pub degenerate: bool,
    pub min_valuation: Option<ValuationQ>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub k: u32,
    pub l: u32,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

/// The quadratic step `K ⊂ L` along `F_p ⊂ F_{p^2} ⊂ F_{p^4} ⊂ …` where `d`
/// stops being degenerate, and the resulting bound `n/2` at the top.
#[derive(Clone, Debug, Serialize)]
pub struct DorothyStep {
    pub step: Option<(u32, u32)>,
    pub min_valuation: ValuationQ,
    pub bound_holds: bool,
    pub three_valued: bool,
    /// Discrete log of some `u` with `v_p(W(u)) ≤ n/2`, when the top spectrum is three-valued.
    pub witness_log_index: Option<usize>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub p: u32,
    pub n: u32,
    pub d: u64,
    pub levels: Vec<TowerLevel>,
    pub george: Vec<PairCheck>,
    pub henry: Vec<PairCheck>,
    pub dorothy: Option<DorothyStep>,
    pub trace_composition: Vec<PairCheck>,
    /// Levels where `gcd(d, p^k - 1) ≠ 1`.
    pub skipped: Vec<String>,
}

impl TowerReport {
    pub fn pass(&self) -> bool {
        self.george.iter().all(|c| c.pass)
            && self.henry.iter().all(|c| c.pass)
            && self.trace_composition.iter().all(|c| c.pass)
            && self.dorothy.as_ref().is_none_or(|s| s.bound_holds)
    }
}

/// Field contexts for every subfield of `F_{p^n}`, reused across exponents.
pub struct Tower {
    p: u32,
    n: u32,
    method: String,
    levels: BTreeMap<u32, FieldContext>,
    /// Trace compatibility per subfield pair; independent of `d`.
    trace_composition: Vec<PairCheck>,
}

impl Tower {
    pub fn build(p: u32, n: u32, method: &str) -> Result<Self> {
        let mut levels = BTreeMap::new();
        for k in divisors(n as u64) {
            levels.insert(k as u32, FieldContext::build(p, k as u32)?);
        }
        let mut trace_composition = Vec::new();
        for (&k, kc) in &levels {
            for (&l, lc) in levels.range(k + 1..).filter(|(&l, _)| l % k == 0) {
                let (kf, lf) = (kc.field(), lc.field());
                trace_composition.push(PairCheck {
                    k,
                    l,
                    lhs: "Tr_L".into(),
                    rhs: "Tr_K . Tr_{L/K}".into(),
                    pass: SubfieldEmbedding::new(kf, lf)?.traces_compose(kf, lf),
                });
            }
        }
        Ok(Self {
            p,
            n,
            method: method.to_string(),
            levels,
            trace_composition,
        })
    }

    pub fn context(&self, k: u32) -> Option<&FieldContext> {
        self.levels.get(&k)
    }

    pub fn checks(&self, d: i64) -> Result<TowerReport> {
        let top = &self.levels[&self.n];
        top.field().require_coprime(d)?;
        let mut levels = Vec::new();
        let mut skipped = Vec::new();
        let mut top_values: Option<WeilValues> = None;
        for (&k, ctx) in &self.levels {
            let f = ctx.field();
            let m = f.units() as u64;
            let dk = canonical_exponent(d, m);
            let valid = gcd(dk, m) == 1 || m == 1;
            let mut level = TowerLevel {
                k,
                q: f.order() as u64,
                d: dk,
                valid,
                degenerate: f.is_degenerate(dk),
                min_valuation: None,
            };
            if valid {
                let method = resolve_method(&self.method, f.order())?;
                let values = weil_values(ctx, dk as i64, method)?;
                level.min_valuation = Some(values.spectrum().min_valuation());
                if k == self.n {
                    top_values = Some(values);
                }
            } else {
                skipped.push(format!("gcd({dk}, {m}) != 1 at degree {k}"));
            }
            levels.push(level);
        }
        let by_k: BTreeMap<u32, &TowerLevel> = levels.iter().map(|l| (l.k, l)).collect();

        let mut george = Vec::new();
        let mut henry = Vec::new();
        for (&k, lk) in &by_k {
            for (&l, ll) in by_k.range(k + 1..) {
                if l % k != 0 {
                    continue;
                }
                let (Some(min_k), Some(min_l)) = (lk.min_valuation, ll.min_valuation) else {
                    continue;
                };
                let bound = min_k.times((l / k) as u64);
                george.push(PairCheck {
                    k,
                    l,
                    lhs: min_l.to_string(),
                    rhs: bound.to_string(),
                    pass: min_l <= bound,
                });
                if l == 2 * k && lk.degenerate && !ll.degenerate {
                    henry.push(PairCheck {
                        k,
                        l,
                        lhs: min_l.to_string(),
                        rhs: k.to_string(),
                        pass: min_l.equals_ratio(k as u64, 1),
                    });
                }
            }
        }

        let dorothy = match top_values {
            Some(values) if is_power_of_two(self.n as u64) && self.n >= 2 => {
                Some(self.dorothy(&by_k, &values))
            }
            _ => None,
        };

        Ok(TowerReport {
            p: self.p,
            n: self.n,
            d: canonical_exponent(d, top.field().units() as u64),
            levels,
            george,
            henry,
            dorothy,
            trace_composition: self.trace_composition.clone(),
            skipped,
        })
    }

    fn dorothy(&self, by_k: &BTreeMap<u32, &TowerLevel>, values: &WeilValues) -> DorothyStep {
        let n = self.n;
        let mut chain = vec![1u32];
        while *chain.last().expect("nonempty") < n {
            chain.push(chain.last().expect("nonempty") * 2);
        }
        let step = chain
            .windows(2)
            .find(|w| by_k[&w[0]].degenerate && !by_k[&w[1]].degenerate)
            .map(|w| (w[0], w[1]));
        let spectrum = values.spectrum();
        let min_f = spectrum.min_valuation();
        let three_valued = spectrum.is_three_valued();
        let bound_holds = step.is_none() || min_f.cmp_ratio(n as u64, 2).is_le();
        let witness_log_index = if three_valued {
            (0..values.field().units()).find(|&i| values.value(i).valuation_p().cmp_ratio(n as u64, 2).is_le())
        } else {
            None
        };
        let note = match (step, three_valued) {
            (None, _) if by_k[&n].degenerate => "d degenerate over F".to_string(),
            (None, _) => "d not degenerate over F_p; chain does not apply".to_string(),
            (Some(_), true) => "three-valued instance".to_string(),
            (Some(_), false) => {
                log::info!(
                    "p={} n={} d={}: no three-valued instances found",
                    self.p,
                    n,
                    values.d()
                );
                "no three-valued instances found".to_string()
            }
        };
        DorothyStep {
            step,
            min_valuation: min_f,
            bound_holds: bound_holds && (!three_valued || witness_log_index.is_some()),
            three_valued,
            witness_log_index,
            note,
        }
    }
}

/// George/Henry checks across every subfield pair of `F_{p^n}`, and the
/// quadratic-chain bound when `n` is a power of 2.
pub fn tower_checks(p: u32, n: u32, d: i64) -> Result<TowerReport> {
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    Tower::build(p, n, "auto")?.checks(d)
}
