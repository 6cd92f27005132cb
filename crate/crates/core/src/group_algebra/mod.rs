//! The group algebra over `F*` with exact `Z[ζ_p]` coefficients.
//!
//! An element `S = Σ S_u [u]` is stored by discrete log: `coeffs[i]` is the
//! coefficient of `[g^i]`, so multiplication in the algebra is cyclic
//! convolution of length `q - 1` and `[1]` is index 0.

mod convolve;
mod fourier;
mod psi_product;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::ff_core::{inverse_exponent, Elem, FieldTables};

pub use convolve::{convolvers, cyclic_convolve_f64, Convolver, FftConvolver, SchoolbookConvolver};
pub use fourier::{fourier_coefficient, inverse_fourier};
pub use psi_product::PsiProduct;
pub(crate) use psi_product::histograms_to_rows;

#[derive(Clone)]
pub struct GAElem {
    field: Arc<FieldTables>,
    coeffs: Vec<CycInt>,
}

impl PartialEq for GAElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec() && self.coeffs == other.coeffs
    }
}

impl Eq for GAElem {}

impl std::fmt::Debug for GAElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GAElem")
            .field("q", &self.field.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl GAElem {
    pub fn from_coeffs(field: Arc<FieldTables>, coeffs: Vec<CycInt>) -> Result<Self> {
        if coeffs.len() != field.units() {
            return Err(Error::Length {
                expected: field.units(),
                got: coeffs.len(),
            });
        }
        if let Some(c) = coeffs.iter().find(|c| c.p() != field.p()) {
            return Err(Error::PrimeMismatch(field.p(), c.p()));
        }
        Ok(Self { field, coeffs })
    }

    /// Lifts integer coefficients (e.g. the counts of `V`).
    pub fn from_integers(field: Arc<FieldTables>, values: &[i64]) -> Result<Self> {
        let p = field.p();
        Self::from_coeffs(field, values.iter().map(|&v| CycInt::from_int(p, v)).collect())
    }

    /// Builds from flat reduced-coefficient rows of width `max(p-1, 1)`.
    pub fn from_rows(field: Arc<FieldTables>, rows: &[i64]) -> Result<Self> {
        let p = field.p();
        let w = (p as usize - 1).max(1);
        let coeffs = rows
            .chunks(w)
            .map(|r| CycInt::from_i64_coeffs(p, r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(field, coeffs)
    }

    pub fn zero(field: Arc<FieldTables>) -> Self {
        let coeffs = vec![CycInt::zero(field.p()); field.units()];
        Self { field, coeffs }
    }

    /// `[1]`, the multiplicative identity.
    pub fn identity(field: Arc<FieldTables>) -> Self {
        let mut e = Self::zero(field);
        e.coeffs[0] = CycInt::one(e.field.p());
        e
    }

    /// `F*` as the all-ones element.
    pub fn all_units(field: Arc<FieldTables>) -> Self {
        let coeffs = vec![CycInt::one(field.p()); field.units()];
        Self { field, coeffs }
    }

    /// `Ψ = Σ_{u∈F*} ψ(u)[u]` with `ψ(u) = ζ^{Tr(u)}`.
    pub fn psi(field: Arc<FieldTables>) -> Self {
        let p = field.p();
        let coeffs = (0..field.units() as u64)
            .map(|i| CycInt::zeta_pow(p, field.trace(field.exp(i)) as i64))
            .collect();
        Self { field, coeffs }
    }

    /// `W = Σ W_{F,d}(u)[u]` assembled as `Ψ·Ψ^{(-1/d)} + F*`.
    pub fn weil(field: Arc<FieldTables>, d: i64) -> Result<Self> {
        let rows = PsiProduct::new(field.clone()).weil_rows(d)?;
        Self::from_rows(field, &rows)
    }

    /// Same construction with an explicit convolver, without the shortcut
    /// in [`PsiProduct`].
    pub fn weil_with(field: Arc<FieldTables>, d: i64, conv: &dyn Convolver) -> Result<Self> {
        field.require_coprime(d)?;
        let m = field.units() as u64;
        let t = -(inverse_exponent(d, m)? as i64);
        let psi = Self::psi(field.clone());
        let prod = conv.convolve(&psi, &psi.reindex_power(t))?;
        prod.checked_add(&Self::all_units(field))
    }

    pub fn field(&self) -> &Arc<FieldTables> {
        &self.field
    }

    pub fn coeffs(&self) -> &[CycInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `[u]` for nonzero `u`.
    pub fn coefficient(&self, u: Elem) -> Option<&CycInt> {
        self.field.log(u).map(|i| &self.coeffs[i as usize])
    }

    /// `|S| = Σ S_u`.
    pub fn weight(&self) -> CycInt {
        self.coeffs
            .iter()
            .fold(CycInt::zero(self.field.p()), |acc, c| &acc + c)
    }

    /// `S^{(t)} = Σ S_u [u^t]`; colliding indices accumulate.
    pub fn reindex_power(&self, t: i64) -> Self {
        let m = self.len() as i128;
        let mut out = Self::zero(self.field.clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = (i as i128 * t as i128).rem_euclid(m) as usize;
            out.coeffs[j] = &out.coeffs[j] + c;
        }
        out
    }

    /// `S̄ = Σ conj(S_u)[u^{-1}]`.
    pub fn conjugate(&self) -> Self {
        let m = self.len();
        let mut coeffs = vec![CycInt::zero(self.field.p()); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(m - i) % m] = c.conj();
        }
        Self {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.spec() == other.field.spec() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    /// Coefficient-wise map, e.g. squaring `W` into `X = Σ W_u^2 [u]`.
    pub fn map_coeffs(&self, f: impl Fn(&CycInt) -> CycInt) -> Self {
        Self {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Product in the algebra with the default convolver.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        FftConvolver.convolve(self, other)
    }

    /// Index of the first coefficient where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::build_field;

    fn field(p: u32, n: u32) -> Arc<FieldTables> {
        Arc::new(build_field(p, n).unwrap())
    }

    #[test]
    fn psi_weight_and_small_cases() {
        for &(p, n) in &[(2, 1), (2, 2), (3, 2), (5, 1), (2, 5), (7, 2)] {
            let f = field(p, n);
            assert_eq!(GAElem::psi(f.clone()).weight(), CycInt::from_int(p, -1));
            assert_eq!(GAElem::psi(f).conjugate().weight(), CycInt::from_int(p, -1));
        }
        let f2 = field(2, 1);
        assert_eq!(GAElem::psi(f2).coeffs(), &[CycInt::from_int(2, -1)]);
    }

    #[test]
    fn psi_over_f4() {
        let f = field(2, 2);
        // Tr(1) = 0; g and g^2 are the two roots of x^2 + x + 1 and have trace 1.
        let expected: Vec<CycInt> = (0..3u64)
            .map(|i| {
                let x = f.exp(i);
                let tr = f.add(x, f.mul(x, x));
                CycInt::from_int(2, if tr.is_zero() { 1 } else { -1 })
            })
            .collect();
        assert_eq!(
            expected,
            vec![CycInt::from_int(2, 1), CycInt::from_int(2, -1), CycInt::from_int(2, -1)]
        );
        assert_eq!(GAElem::psi(f).coeffs(), expected.as_slice());
    }

    #[test]
    fn weights_of_basic_elements() {
        let f = field(3, 3);
        assert_eq!(GAElem::all_units(f.clone()).weight(), CycInt::from_int(3, 26));
        assert_eq!(GAElem::identity(f).weight(), CycInt::one(3));
    }

    #[test]
    fn reindexing() {
        let f = field(3, 2);
        let psi = GAElem::psi(f.clone());
        assert_eq!(psi.reindex_power(1), psi);
        let collapsed = psi.reindex_power(8);
        assert_eq!(collapsed.coeffs()[0], psi.weight());
        assert!(collapsed.coeffs()[1..].iter().all(CycInt::is_zero));
        for t in [-3i64, 2, 4, 5, 6] {
            assert_eq!(psi.reindex_power(t).weight(), psi.weight());
        }
    }

    #[test]
    fn conjugation_is_an_involution() {
        let f = field(5, 2);
        let units = GAElem::all_units(f.clone());
        assert_eq!(units.conjugate(), units);
        let psi = GAElem::psi(f);
        let s = psi.checked_add(&psi.reindex_power(7)).unwrap();
        assert_eq!(s.conjugate().conjugate(), s);
        assert_eq!(s.conjugate().weight(), s.weight().conj());
    }

    #[test]
    fn weil_element_f4_degenerate() {
        let f = field(2, 2);
        let w = GAElem::weil(f.clone(), 1).unwrap();
        // u = -1 = 1 gets q, every other u gets 0
        assert_eq!(w.coefficient(Elem::ONE), Some(&CycInt::from_int(2, 4)));
        assert!(w.coeffs()[1..].iter().all(CycInt::is_zero));
        assert!(GAElem::weil(f, 3).is_err());
    }

    #[test]
    fn mismatched_fields() {
        let a = GAElem::psi(field(2, 3));
        let b = GAElem::psi(field(3, 2));
        assert!(a.checked_add(&b).is_err());
        assert!(a.convolve(&b).is_err());
    }
}
