use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use super::convolve::FftPlan;
use crate::error::{Error, Result};
use crate::ff_core::{inverse_exponent, FieldTables};

/// Per-field precomputation for `W = Ψ·Ψ^{(-1/d)} + F*`.
///
/// `Ψ` splits into `p` indicator vectors `I_j[i] = [Tr(g^i) = j]`, and
/// `Ψ^{(t)}` is the same indicators permuted by `i ↦ i·t`. The product's
/// `ζ^r` component is `Σ_{j+k≡r} I_j * I_k^{(t)}`, so one exponent costs
/// `2p` FFTs and `p^2` pointwise products. Every component entry counts
/// pairs in `F*`, hence is bounded by `q - 1` and rounds exactly.
pub struct PsiProduct {
    field: Arc<FieldTables>,
    plan: FftPlan,
    traces: Vec<u32>,
    psi_spectra: Vec<Vec<Complex64>>,
}

impl PsiProduct {
    pub fn new(field: Arc<FieldTables>) -> Self {
        let m = field.units();
        let p = field.p() as usize;
        let plan = FftPlan::new(m);
        let traces: Vec<u32> = (0..m as u64).map(|i| field.trace(field.exp(i))).collect();
        let psi_spectra = (0..p)
            .map(|j| {
                let ind: Vec<f64> = traces
                    .iter()
                    .map(|&t| if t as usize == j { 1.0 } else { 0.0 })
                    .collect();
                plan.forward(&ind)
            })
            .collect();
        Self {
            field,
            plan,
            traces,
            psi_spectra,
        }
    }

    pub fn field(&self) -> &Arc<FieldTables> {
        &self.field
    }

    /// Trace histograms of `W_{F,d}(g^i)` over all `x ∈ F`: `counts[i*p + j]`.
    pub fn weil_histograms(&self, d: i64) -> Result<Vec<u64>> {
        self.field.require_coprime(d)?;
        let m = self.field.units();
        let p = self.field.p() as usize;
        let t = (m as u64 - inverse_exponent(d, m as u64)? % m as u64) % m as u64;
        let reindexed: Vec<Vec<Complex64>> = (0..p)
            .map(|k| {
                let mut ind = vec![0.0; m];
                for (i, &tr) in self.traces.iter().enumerate() {
                    if tr as usize == k {
                        ind[(i as u64 * t % m as u64) as usize] = 1.0;
                    }
                }
                self.plan.forward(&ind)
            })
            .collect();
        let mut counts = vec![0u64; m * p];
        for r in 0..p {
            let mut acc = vec![Complex64::zero(); self.plan.size];
            for j in 0..p {
                let k = (r + p - j) % p;
                for ((s, a), b) in acc
                    .iter_mut()
                    .zip(&self.psi_spectra[j])
                    .zip(&reindexed[k])
                {
                    *s += a * b;
                }
            }
            for (i, v) in self.plan.inverse_cyclic(acc).into_iter().enumerate() {
                let c = v.round();
                if (v - c).abs() > 0.25 || c < 0.0 {
                    return Err(Error::Invariant(format!(
                        "Psi product rounding lost precision ({v})"
                    )));
                }
                counts[i * p + r] = c as u64;
            }
        }
        // x = 0 contributes ψ(0) = ζ^0 to every W_u.
        for i in 0..m {
            counts[i * p] += 1;
            let total: u64 = counts[i * p..(i + 1) * p].iter().sum();
            if total != self.field.order() as u64 {
                return Err(Error::Invariant(format!(
                    "trace histogram at index {i} sums to {total}"
                )));
            }
        }
        Ok(counts)
    }

    /// Reduced `Z[ζ_p]` coefficient rows of every `W_{F,d}(g^i)`, flattened.
    pub fn weil_rows(&self, d: i64) -> Result<Vec<i64>> {
        let p = self.field.p() as usize;
        let hist = self.weil_histograms(d)?;
        Ok(histograms_to_rows(&hist, p))
    }
}

/// `c_j = N_j - N_{p-1}` for each length-`p` histogram.
pub(crate) fn histograms_to_rows(hist: &[u64], p: usize) -> Vec<i64> {
    let w = (p - 1).max(1);
    let mut rows = Vec::with_capacity(hist.len() / p * w);
    for h in hist.chunks(p) {
        let top = h[p - 1] as i64;
        rows.extend(h.iter().take(w).map(|&c| c as i64 - top));
    }
    rows
}
