//! Weil sum spectra `{W_{F,d}(u) : u ∈ F*}` and exponent bookkeeping.

mod methods;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith;
use crate::cyclotomic::{CycInt, ValuationQ};
use crate::error::{Error, Result};
use crate::ff_core::{inverse_exponent, Elem, FieldSpec, FieldTables};
use crate::group_algebra::{GAElem, PsiProduct};

pub use methods::{
    resolve_method, spectrum_methods, weil_sum_naive, FastMethod, NaiveMethod, SpectrumMethod,
    AUTO_FAST_THRESHOLD,
};

/// A field plus lazily built per-field engine state, shared across exponents.
pub struct FieldContext {
    field: Arc<FieldTables>,
    psi: OnceLock<PsiProduct>,
}

impl FieldContext {
    pub fn new(field: Arc<FieldTables>) -> Self {
        Self {
            field,
            psi: OnceLock::new(),
        }
    }

    pub fn build(p: u32, n: u32) -> Result<Self> {
        Ok(Self::new(Arc::new(crate::ff_core::build_field(p, n)?)))
    }

    pub fn field(&self) -> &Arc<FieldTables> {
        &self.field
    }

    pub fn psi_product(&self) -> &PsiProduct {
        self.psi.get_or_init(|| PsiProduct::new(self.field.clone()))
    }
}

/// `d` reduced to `[1, q-1]`.
pub fn canonical_exponent(d: i64, m: u64) -> u64 {
    match d.rem_euclid(m as i64) as u64 {
        0 => m,
        r => r,
    }
}

/// Orbit of `d` under `d ↦ p·d mod (q-1)`, sorted, as representatives in `[1, q-1]`.
pub fn exponent_orbit(p: u32, q: u64, d: i64) -> Vec<u64> {
    let m = q - 1;
    let start = canonical_exponent(d, m);
    let mut orbit = vec![start];
    let mut cur = start;
    loop {
        cur = canonical_exponent((cur as u128 * p as u128 % m as u128) as i64, m);
        if cur == start {
            break;
        }
        orbit.push(cur);
    }
    orbit.sort_unstable();
    orbit
}

/// One minimal representative per Frobenius orbit of exponents coprime to `q-1`.
pub fn canonical_exponent_classes(p: u32, q: u64) -> Vec<u64> {
    let m = q - 1;
    if m == 1 {
        return vec![1];
    }
    let mut seen = vec![false; m as usize + 1];
    let mut classes = Vec::new();
    for d in 1..m {
        if seen[d as usize] || arith::gcd(d, m) != 1 {
            continue;
        }
        for e in exponent_orbit(p, q, d as i64) {
            seen[e as usize] = true;
        }
        classes.push(d);
    }
    classes
}

/// Class representative of `1/d mod (q-1)`.
pub fn inverse_class(p: u32, q: u64, d: i64) -> Result<u64> {
    let inv = inverse_exponent(d, q - 1)?;
    Ok(exponent_orbit(p, q, inv as i64)[0])
}

/// Per-`u` values `W_{F,d}(g^i)` as flat reduced coefficient rows.
#[derive(Clone)]
pub struct WeilValues {
    field: Arc<FieldTables>,
    d: u64,
    rows: Vec<i64>,
}

impl WeilValues {
    pub(crate) fn new(field: Arc<FieldTables>, d: u64, rows: Vec<i64>) -> Self {
        Self { field, d, rows }
    }

    fn width(&self) -> usize {
        (self.field.p() as usize - 1).max(1)
    }

    pub fn field(&self) -> &Arc<FieldTables> {
        &self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn rows(&self) -> &[i64] {
        &self.rows
    }

    pub fn row(&self, log_index: usize) -> &[i64] {
        let w = self.width();
        &self.rows[log_index * w..(log_index + 1) * w]
    }

    /// `W_{F,d}(g^i)`.
    pub fn value(&self, log_index: usize) -> CycInt {
        CycInt::from_i64_coeffs(self.field.p(), self.row(log_index)).expect("row width")
    }

    pub fn value_at(&self, u: Elem) -> Option<CycInt> {
        self.field.log(u).map(|i| self.value(i as usize))
    }

    pub fn to_element(&self) -> GAElem {
        GAElem::from_rows(self.field.clone(), &self.rows).expect("row layout")
    }

    pub fn spectrum(&self) -> WeilSpectrum {
        let mut counts: HashMap<&[i64], u64> = HashMap::new();
        for r in self.rows.chunks(self.width()) {
            *counts.entry(r).or_default() += 1;
        }
        let p = self.field.p();
        let mut entries: Vec<(CycInt, u64)> = counts
            .into_iter()
            .map(|(r, c)| (CycInt::from_i64_coeffs(p, r).expect("row width"), c))
            .collect();
        entries.sort_by_cached_key(|(v, _)| v.to_string());
        WeilSpectrum {
            field_spec: self.field.spec().clone(),
            d: self.d,
            entries,
            degenerate: self.field.is_degenerate(self.d),
        }
    }
}

/// Computes every `W_{F,d}(u)` with the given method.
pub fn weil_values(ctx: &FieldContext, d: i64, method: &dyn SpectrumMethod) -> Result<WeilValues> {
    let field = ctx.field();
    field.require_coprime(d)?;
    let p = field.p() as usize;
    let hist = method.histograms(ctx, d)?;
    let rows = crate::group_algebra::histograms_to_rows(&hist, p);
    Ok(WeilValues::new(
        field.clone(),
        canonical_exponent(d, field.units() as u64),
        rows,
    ))
}

pub fn weil_spectrum(ctx: &FieldContext, d: i64, method: &dyn SpectrumMethod) -> Result<WeilSpectrum> {
    Ok(weil_values(ctx, d, method)?.spectrum())
}

/// The multiset of values over `u ∈ F*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilSpectrum {
    pub field_spec: FieldSpec,
    pub d: u64,
    /// Distinct values with multiplicities, sorted by serialized value.
    pub entries: Vec<(CycInt, u64)>,
    pub degenerate: bool,
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    p: u32,
    n: u32,
    modulus: &'a [u32],
    d: u64,
    class_orbit: Vec<u64>,
    degenerate: bool,
    entries: Vec<(String, u64)>,
}

impl WeilSpectrum {
    pub fn p(&self) -> u32 {
        self.field_spec.p
    }

    pub fn n(&self) -> u32 {
        self.field_spec.n
    }

    pub fn q(&self) -> u64 {
        self.field_spec.order()
    }

    /// Number of distinct values (`v` in "v-valued").
    pub fn value_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_three_valued(&self) -> bool {
        self.entries.len() == 3
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, value: &CycInt) -> u64 {
        self.entries
            .iter()
            .find(|(v, _)| v == value)
            .map_or(0, |(_, m)| *m)
    }

    /// `Σ_{u∈F*} W_u^k`, exact.
    pub fn moment(&self, k: u32) -> CycInt {
        self.entries.iter().fold(CycInt::zero(self.p()), |acc, (v, m)| {
            &acc + &v.pow(k).scale(&BigInt::from(*m))
        })
    }

    /// Minimum `v_p` over the values (`+∞` only if every value is 0).
    pub fn min_valuation(&self) -> ValuationQ {
        self.entries
            .iter()
            .map(|(v, _)| v.valuation_p())
            .min()
            .unwrap_or(ValuationQ::infinite(self.p()))
    }

    /// The values as rational integers, if all of them are.
    pub fn integer_values(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|(v, _)| v.as_i64()).collect()
    }

    pub fn class_orbit(&self) -> Vec<u64> {
        exponent_orbit(self.p(), self.q(), self.d as i64)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpectrumJson {
            p: self.p(),
            n: self.n(),
            modulus: &self.field_spec.modulus,
            d: self.d,
            class_orbit: self.class_orbit(),
            degenerate: self.degenerate,
            entries: self
                .entries
                .iter()
                .map(|(v, m)| (v.to_string(), *m))
                .collect(),
        })
        .expect("spectrum serializes")
    }

    /// Spectrum from explicit entries (used for synthetic negative controls).
    pub fn from_entries(field_spec: FieldSpec, d: u64, entries: Vec<(CycInt, u64)>) -> Result<Self> {
        let q = field_spec.order();
        let total: u64 = entries.iter().map(|(_, m)| m).sum();
        if total != q - 1 {
            return Err(Error::Precondition(format!(
                "multiplicities sum to {total}, expected {}",
                q - 1
            )));
        }
        let m = q - 1;
        let degenerate = m == 1
            || (0..field_spec.n).any(|k| {
                arith::pow_mod(field_spec.p as u64, k as u64, m) == canonical_exponent(d as i64, m) % m
            });
        let mut entries = entries;
        entries.sort_by_cached_key(|(v, _)| v.to_string());
        Ok(Self {
            field_spec,
            d,
            entries,
            degenerate,
        })
    }
}
