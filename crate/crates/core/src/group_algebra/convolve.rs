use std::sync::LazyLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rustfft::FftPlanner;

use super::GAElem;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::registry::{Named, Registry};

/// Multiplication in the group algebra.
pub trait Convolver: Named + Send + Sync {
    fn convolve(&self, a: &GAElem, b: &GAElem) -> Result<GAElem>;
}

static CONVOLVERS: LazyLock<Registry<dyn Convolver>> = LazyLock::new(|| {
    Registry::<dyn Convolver>::new("convolver")
        .with(Box::new(SchoolbookConvolver))
        .with(Box::new(FftConvolver))
});

/// Built-in convolvers: `schoolbook` (exact, quadratic) and `fft`.
pub fn convolvers() -> &'static Registry<dyn Convolver> {
    &CONVOLVERS
}

fn check_fields(a: &GAElem, b: &GAElem) -> Result<()> {
    if a.field.spec() != b.field.spec() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Direct `Σ_{uv=w} S_u T_v` in exact cyclotomic arithmetic.
pub struct SchoolbookConvolver;

impl Named for SchoolbookConvolver {
    fn name(&self) -> &'static str {
        "schoolbook"
    }

    fn description(&self) -> &'static str {
        "exact O(q^2) cyclic convolution over Z[zeta_p]"
    }
}

impl Convolver for SchoolbookConvolver {
    fn convolve(&self, a: &GAElem, b: &GAElem) -> Result<GAElem> {
        check_fields(a, b)?;
        let m = a.len();
        let p = a.field.p();
        let mut out = vec![CycInt::zero(p); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i + j) % m;
                out[k] = &out[k] + &(x * y);
            }
        }
        GAElem::from_coeffs(a.field.clone(), out)
    }
}

/// Splits both operands into integer component vectors (one per basis power
/// of `ζ`), convolves every component pair with a floating-point FFT and rounds.
///
/// Falls back to [`SchoolbookConvolver`] when the output could exceed the range
/// where `f64` rounding is exact.
pub struct FftConvolver;

/// Output magnitudes above this are not trusted to round correctly.
const FFT_EXACT_BOUND: f64 = (1u64 << 44) as f64;

impl Named for FftConvolver {
    fn name(&self) -> &'static str {
        "fft"
    }

    fn description(&self) -> &'static str {
        "component-wise floating FFT with nearest-integer rounding"
    }
}

fn components(e: &GAElem) -> Option<(Vec<Vec<f64>>, f64)> {
    let w = e.coeffs[0].coeffs().len();
    let mut comps = vec![vec![0.0; e.len()]; w];
    let mut max = 0.0f64;
    for (i, c) in e.coeffs.iter().enumerate() {
        for (j, x) in c.coeffs().iter().enumerate() {
            let v = x.to_i64()? as f64;
            max = max.max(v.abs());
            comps[j][i] = v;
        }
    }
    Some((comps, max))
}

impl Convolver for FftConvolver {
    fn convolve(&self, a: &GAElem, b: &GAElem) -> Result<GAElem> {
        check_fields(a, b)?;
        let (ca, ma) = match components(a) {
            Some(x) => x,
            None => return SchoolbookConvolver.convolve(a, b),
        };
        let (cb, mb) = match components(b) {
            Some(x) => x,
            None => return SchoolbookConvolver.convolve(a, b),
        };
        let m = a.len();
        let w = ca.len();
        if ma * mb * (m * w) as f64 > FFT_EXACT_BOUND {
            return SchoolbookConvolver.convolve(a, b);
        }
        let p = a.field.p() as usize;
        // raw[r] collects the coefficient of ζ^r before reduction, r < p.
        let mut raw = vec![vec![0.0f64; m]; p];
        let plan = FftPlan::new(m);
        let fa: Vec<_> = ca.iter().map(|v| plan.forward(v)).collect();
        let fb: Vec<_> = cb.iter().map(|v| plan.forward(v)).collect();
        let mut acc = vec![vec![Complex64::zero(); plan.size]; p];
        for (j, x) in fa.iter().enumerate() {
            for (k, y) in fb.iter().enumerate() {
                let r = (j + k) % p;
                for ((s, u), v) in acc[r].iter_mut().zip(x).zip(y) {
                    *s += u * v;
                }
            }
        }
        for (r, spec) in acc.into_iter().enumerate() {
            raw[r] = plan.inverse_cyclic(spec);
        }
        let coeffs = (0..m)
            .map(|i| {
                let top = raw[p - 1][i];
                let reduced = (0..w)
                    .map(|j| round_exact(raw[j][i] - top))
                    .collect::<Result<Vec<_>>>()?;
                CycInt::from_coeffs(a.field.p(), reduced)
            })
            .collect::<Result<Vec<_>>>()?;
        GAElem::from_coeffs(a.field.clone(), coeffs)
    }
}

fn round_exact(x: f64) -> Result<BigInt> {
    let r = x.round();
    if (x - r).abs() > 0.25 {
        return Err(Error::Invariant(format!(
            "FFT rounding lost precision ({x})"
        )));
    }
    Ok(BigInt::from(r as i64))
}

/// Zero-padded power-of-two FFT for cyclic convolutions of length `m`.
pub(crate) struct FftPlan {
    pub(crate) m: usize,
    pub(crate) size: usize,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl FftPlan {
    pub(crate) fn new(m: usize) -> Self {
        let size = (2 * m).saturating_sub(1).next_power_of_two().max(1);
        let mut planner = FftPlanner::new();
        Self {
            m,
            size,
            fwd: planner.plan_fft_forward(size),
            inv: planner.plan_fft_inverse(size),
        }
    }

    pub(crate) fn forward(&self, v: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::zero(); self.size];
        for (b, &x) in buf.iter_mut().zip(v) {
            b.re = x;
        }
        self.fwd.process(&mut buf);
        buf
    }

    /// Inverse transform of a linear-convolution spectrum, folded mod `m`.
    pub(crate) fn inverse_cyclic(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut spec);
        let scale = 1.0 / self.size as f64;
        let mut out = vec![0.0; self.m];
        for (i, c) in spec.iter().enumerate().take(2 * self.m - 1) {
            out[i % self.m] += c.re * scale;
        }
        out
    }
}

/// Cyclic convolution of two real sequences of equal length via zero-padded FFT.
pub fn cyclic_convolve_f64(a: &[f64], b: &[f64]) -> Vec<f64> {
    assert_eq!(a.len(), b.len());
    let plan = FftPlan::new(a.len());
    let fa = plan.forward(a);
    let fb = plan.forward(b);
    plan.inverse_cyclic(fa.iter().zip(&fb).map(|(x, y)| x * y).collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::ff_core::build_field;

    fn random_elem(f: &Arc<crate::ff_core::FieldTables>, rng: &mut ChaCha8Rng, bound: i64) -> GAElem {
        let p = f.p();
        let w = (p as usize - 1).max(1);
        let coeffs = (0..f.units())
            .map(|_| {
                let v: Vec<i64> = (0..w).map(|_| rng.gen_range(-bound..=bound)).collect();
                CycInt::from_i64_coeffs(p, &v).unwrap()
            })
            .collect();
        GAElem::from_coeffs(f.clone(), coeffs).unwrap()
    }

    #[test]
    fn cyclic_convolution_matches_direct_sum() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0];
        let b = [0.0, 1.0, 0.0, 0.0, -1.0];
        let c = cyclic_convolve_f64(&a, &b);
        let mut direct = [0.0; 5];
        for i in 0..5 {
            for j in 0..5 {
                direct[(i + j) % 5] += a[i] * b[j];
            }
        }
        for (x, y) in c.iter().zip(&direct) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn fft_and_schoolbook_agree_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, n) in &[(2, 4), (3, 3), (5, 2), (7, 1), (2, 6)] {
            let f = Arc::new(build_field(p, n).unwrap());
            for _ in 0..4 {
                let a = random_elem(&f, &mut rng, 50);
                let b = random_elem(&f, &mut rng, 50);
                let s = SchoolbookConvolver.convolve(&a, &b).unwrap();
                assert_eq!(FftConvolver.convolve(&a, &b).unwrap(), s);
                assert_eq!(FftConvolver.convolve(&b, &a).unwrap(), s);
            }
        }
    }

    #[test]
    fn algebra_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = Arc::new(build_field(3, 2).unwrap());
        let (a, b, c) = (
            random_elem(&f, &mut rng, 9),
            random_elem(&f, &mut rng, 9),
            random_elem(&f, &mut rng, 9),
        );
        let conv = |x: &GAElem, y: &GAElem| SchoolbookConvolver.convolve(x, y).unwrap();
        assert_eq!(conv(&a, &GAElem::identity(f.clone())), a);
        assert_eq!(conv(&conv(&a, &b), &c), conv(&a, &conv(&b, &c)));
        assert_eq!(
            conv(&a, &b.checked_add(&c).unwrap()),
            conv(&a, &b).checked_add(&conv(&a, &c)).unwrap()
        );
        assert_eq!(conv(&a, &b).weight(), &a.weight() * &b.weight());
        // S·F* = |S|·F*
        let units = GAElem::all_units(f.clone());
        let expected = units.map_coeffs(|_| a.weight());
        assert_eq!(conv(&a, &units), expected);
    }

    #[test]
    fn oversized_inputs_fall_back_to_exact() {
        let f = Arc::new(build_field(2, 3).unwrap());
        let big = GAElem::from_integers(f.clone(), &[1 << 40, 3, 0, 0, 0, 0, -5]).unwrap();
        let s = SchoolbookConvolver.convolve(&big, &big).unwrap();
        assert_eq!(FftConvolver.convolve(&big, &big).unwrap(), s);
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(convolvers().names(), vec!["schoolbook", "fft"]);
        assert!(convolvers().get("ntt").is_err());
    }
}
