use std::sync::LazyLock;

use super::FieldContext;
use crate::cyclotomic::CycInt;
use crate::error::Result;
use crate::ff_core::{Elem, FieldTables};
use crate::registry::{Named, Registry};

/// Fields up to this order use the naive method under `auto`.
pub const AUTO_FAST_THRESHOLD: u32 = 512;

/// A way of computing all trace histograms of `x ↦ x^d + u·x`.
pub trait SpectrumMethod: Named + Send + Sync {
    /// `counts[i*p + j] = #{x ∈ F : Tr(x^d + g^i·x) = j}`.
    fn histograms(&self, ctx: &FieldContext, d: i64) -> Result<Vec<u64>>;
}

static METHODS: LazyLock<Registry<dyn SpectrumMethod>> = LazyLock::new(|| {
    Registry::<dyn SpectrumMethod>::new("spectrum method")
        .with(Box::new(NaiveMethod))
        .with(Box::new(FastMethod))
});

pub fn spectrum_methods() -> &'static Registry<dyn SpectrumMethod> {
    &METHODS
}

/// Resolves `auto`, `naive` or `fast` for a field of order `q`. The fast
/// method does `p^2` pointwise products of length about `2q` per exponent, so
/// `auto` also keeps large-characteristic fields (`p^2 > q`) on the naive path.
pub fn resolve_method(name: &str, q: u32) -> Result<&'static dyn SpectrumMethod> {
    let name = match name {
        "auto" => {
            let p = crate::arith::prime_factors(q as u64).first().copied().unwrap_or(1);
            if q <= AUTO_FAST_THRESHOLD || p * p > q as u64 {
                "naive"
            } else {
                "fast"
            }
        }
        other => other,
    };
    spectrum_methods().get(name)
}

/// Direct summation over `x ∈ F` for every `u`: `O(q^2)`.
pub struct NaiveMethod;

impl Named for NaiveMethod {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn description(&self) -> &'static str {
        "direct summation over all x for every u"
    }
}

fn histogram_at(t: &FieldTables, powers: &[Elem], u: Elem, out: &mut [u64]) {
    for (x, &xd) in t.elements().zip(powers) {
        let s = t.add(xd, t.mul(u, x));
        out[t.trace(s) as usize] += 1;
    }
}

fn power_table(t: &FieldTables, d: i64) -> Result<Vec<Elem>> {
    t.elements().map(|x| t.group_pow(x, d)).collect()
}

impl SpectrumMethod for NaiveMethod {
    fn histograms(&self, ctx: &FieldContext, d: i64) -> Result<Vec<u64>> {
        let t = ctx.field();
        t.require_coprime(d)?;
        let p = t.p() as usize;
        let powers = power_table(t, d)?;
        let mut counts = vec![0u64; t.units() * p];
        for (i, chunk) in counts.chunks_mut(p).enumerate() {
            histogram_at(t, &powers, t.exp(i as u64), chunk);
        }
        Ok(counts)
    }
}

/// `Ψ·Ψ^{(-1/d)} + F*` through FFT convolution of trace indicators.
pub struct FastMethod;

impl Named for FastMethod {
    fn name(&self) -> &'static str {
        "fast"
    }

    fn description(&self) -> &'static str {
        "group-algebra product of Psi with its reindexing, via FFT"
    }
}

impl SpectrumMethod for FastMethod {
    fn histograms(&self, ctx: &FieldContext, d: i64) -> Result<Vec<u64>> {
        ctx.psi_product().weil_histograms(d)
    }
}

/// `W_{F,d}(u) = Σ_{x∈F} ψ(x^d + u·x)` for a single `u`, including `u = 0`.
pub fn weil_sum_naive(t: &FieldTables, d: i64, u: Elem) -> Result<CycInt> {
    t.require_coprime(d)?;
    t.check(u)?;
    let p = t.p() as usize;
    let mut counts = vec![0u64; p];
    histogram_at(t, &power_table(t, d)?, u, &mut counts);
    CycInt::from_trace_histogram(t.p(), &counts)
}
