//! Exact arithmetic in `Z[ζ_p]`.
//!
//! A [`CycInt`] is stored in the power basis `1, ζ, …, ζ^{p-2}`; the relation
//! `1 + ζ + … + ζ^{p-1} = 0` is applied eagerly so the representation is
//! unique and equality is a coefficient compare. For `p = 2` the ring is `Z`.

mod valuation;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use valuation::{p_decompose, PDecomp, ValuationQ};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<BigInt>,
}

fn basis_len(p: u32) -> usize {
    (p as usize - 1).max(1)
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        Self {
            p,
            coeffs: vec![BigInt::zero(); basis_len(p)],
        }
    }

    pub fn from_int(p: u32, k: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = k.into();
        z
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// `ζ^j`, reduced.
    pub fn zeta_pow(p: u32, j: i64) -> Self {
        let mut raw = vec![BigInt::zero(); p as usize];
        raw[j.rem_euclid(p as i64) as usize] = BigInt::one();
        Self::reduce(p, raw)
    }

    /// Builds from coefficients already in the reduced basis.
    pub fn from_coeffs(p: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != basis_len(p) {
            return Err(Error::Length {
                expected: basis_len(p),
                got: coeffs.len(),
            });
        }
        Ok(Self { p, coeffs })
    }

    pub fn from_i64_coeffs(p: u32, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(p, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `Σ_j counts[j]·ζ^j` for a histogram of trace values.
    pub fn from_trace_histogram(p: u32, counts: &[u64]) -> Result<Self> {
        if counts.len() != p as usize {
            return Err(Error::Length {
                expected: p as usize,
                got: counts.len(),
            });
        }
        Ok(Self::reduce(
            p,
            counts.iter().map(|&c| BigInt::from(c)).collect(),
        ))
    }

    /// Reduces a length-`p` vector over `1, ζ, …, ζ^{p-1}`.
    fn reduce(p: u32, raw: Vec<BigInt>) -> Self {
        debug_assert_eq!(raw.len(), p as usize);
        let top = raw[p as usize - 1].clone();
        let mut coeffs: Vec<BigInt> = raw.into_iter().take(basis_len(p)).collect();
        for c in &mut coeffs {
            *c -= &top;
        }
        Self { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this value equals, if it lies in `Z`.
    pub fn is_rational_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Like [`is_rational_integer`](Self::is_rational_integer) but narrowed to `i64`.
    pub fn as_i64(&self) -> Option<i64> {
        self.is_rational_integer()?.to_i64()
    }

    fn same_p(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_p(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { p: self.p, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_p(other)?;
        if let Some(prod) = self.mul_small(other) {
            return Ok(prod);
        }
        let p = self.p as usize;
        let mut raw = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[(i + j) % p] += a * b;
            }
        }
        Ok(Self::reduce(self.p, raw))
    }

    /// Product through `i128` accumulators when no intermediate can overflow.
    fn mul_small(&self, other: &Self) -> Option<Self> {
        let small = |x: &Self| -> Option<Vec<i64>> { x.coeffs.iter().map(|c| c.to_i64()).collect() };
        let (a, b) = (small(self)?, small(other)?);
        let bits = |v: &[i64]| 64 - v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0).leading_zeros();
        let len_bits = 64 - (a.len() as u64).leading_zeros();
        if bits(&a) + bits(&b) + len_bits > 125 {
            return None;
        }
        let p = self.p as usize;
        let mut raw = vec![0i128; p];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate() {
                raw[(i + j) % p] += x as i128 * y as i128;
            }
        }
        let top = raw[p - 1];
        let coeffs = raw[..basis_len(self.p)].iter().map(|&c| BigInt::from(c - top)).collect();
        Some(Self { p: self.p, coeffs })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut raw = vec![BigInt::zero(); p];
        for (j, c) in self.coeffs.iter().enumerate() {
            raw[(p - j) % p] += c;
        }
        Self::reduce(self.p, raw)
    }

    /// Image under `ζ ↦ 1`, reduced mod `p`: the residue modulo `1 - ζ`.
    pub fn residue_mod_pi(&self) -> u32 {
        let s: BigInt = self.coeffs.iter().sum();
        s.mod_floor(&BigInt::from(self.p)).to_u32().unwrap()
    }

    /// Exact quotient by `1 - ζ`, or `None` when it does not divide.
    pub fn div_one_minus_zeta(&self) -> Option<Self> {
        // x_j = y_j - y_{j-1} + y_{p-2}, so Σ x_j = p·y_{p-2}.
        let p = BigInt::from(self.p);
        let sum: BigInt = self.coeffs.iter().sum();
        let (top, r) = sum.div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        let mut y = Vec::with_capacity(self.coeffs.len());
        let mut prev = BigInt::zero();
        for x in &self.coeffs {
            let yj = x + &prev - &top;
            prev = yj.clone();
            y.push(yj);
        }
        debug_assert_eq!(y.last(), Some(&top));
        Some(Self {
            p: self.p,
            coeffs: y,
        })
    }

    /// `v_p` normalized so that `v_p(p) = 1`; `(1-ζ)` has valuation `1/(p-1)`.
    pub fn valuation_p(&self) -> ValuationQ {
        if self.is_zero() {
            return ValuationQ::infinite(self.p);
        }
        // Pull out whole powers of p first; p = unit·(1-ζ)^{p-1}.
        let p = BigInt::from(self.p);
        let mut k = 0u64;
        let mut x = self.clone();
        while x.coeffs.iter().all(|c| c.is_multiple_of(&p)) {
            for c in &mut x.coeffs {
                *c /= &p;
            }
            k += (self.p - 1).max(1) as u64;
        }
        ValuationQ::finite(self.p, k + x.order_mod_p())
    }

    /// Order of `x` at `1 - ζ` when `x ∉ pZ[ζ]`. Since `Z[ζ]/(p) = F_p[t]/(t^{p-1})`
    /// with `t = 1 - ζ`, this is the lowest `r` with a nonzero `t^r` coefficient of
    /// `Σ c_j (1-t)^j`, i.e. `Σ_j c_j·C(j, r) ≢ 0 (mod p)`.
    fn order_mod_p(&self) -> u64 {
        let p = self.p as u64;
        let pb = BigInt::from(self.p);
        let c: Vec<u64> = self
            .coeffs
            .iter()
            .map(|x| x.mod_floor(&pb).to_u64().unwrap_or(0))
            .collect();
        let mut fact = vec![1u64; c.len()];
        for j in 1..c.len() {
            fact[j] = fact[j - 1] * j as u64 % p;
        }
        let mut inv_fact = vec![1u64; c.len()];
        if let Some(&last) = fact.last() {
            inv_fact[c.len() - 1] = crate::arith::pow_mod(last, p - 2, p);
            for j in (1..c.len()).rev() {
                inv_fact[j - 1] = inv_fact[j] * j as u64 % p;
            }
        }
        for r in 0..c.len() {
            let s = (r..c.len()).fold(0u64, |acc, j| {
                (acc + c[j] * (fact[j] * inv_fact[j - r] % p)) % p
            });
            if s != 0 {
                return r as u64;
            }
        }
        unreachable!("coefficients not all divisible by p")
    }

    /// Numeric value at `ζ = e^{2πi/p}`.
    pub fn to_complex(&self) -> Complex64 {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / p;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Parses the `c0,c1,…` serialization for characteristic `p`.
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| BigInt::from_str(t.trim()))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("bad cyclotomic integer `{s}`: {e}")))?;
        Self::from_coeffs(p, coeffs)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt<{}>({})", self.p, self)
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs).expect("operands share the same p")
            }
        }
        impl $tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}
