use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `v_p` on `Q(ζ_p)`, stored as `k/(p-1)`; `None` numerator is `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ValuationQ {
    p: u32,
    num: Option<u64>,
}

impl ValuationQ {
    pub fn finite(p: u32, k: u64) -> Self {
        Self { p, num: Some(k) }
    }

    pub fn infinite(p: u32) -> Self {
        Self { p, num: None }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn numerator(&self) -> Option<u64> {
        self.num
    }

    /// Fixed denominator `p - 1` (1 when `p = 2`).
    pub fn denominator(&self) -> u64 {
        (self.p as u64 - 1).max(1)
    }

    pub fn is_infinite(&self) -> bool {
        self.num.is_none()
    }

    /// Ordering against the rational `num/den` (`den > 0`).
    pub fn cmp_ratio(&self, num: u64, den: u64) -> Ordering {
        match self.num {
            None => Ordering::Greater,
            Some(k) => (k as u128 * den as u128).cmp(&(num as u128 * self.denominator() as u128)),
        }
    }

    pub fn equals_ratio(&self, num: u64, den: u64) -> bool {
        self.cmp_ratio(num, den) == Ordering::Equal
    }

    pub fn to_f64(&self) -> f64 {
        match self.num {
            None => f64::INFINITY,
            Some(k) => k as f64 / self.denominator() as f64,
        }
    }

    /// Valuation of a product.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "valuations at different primes");
        Self {
            p: self.p,
            num: match (self.num, other.num) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    /// Multiplies a finite valuation by a positive integer (an extension degree).
    pub fn times(&self, m: u64) -> Self {
        Self {
            p: self.p,
            num: self.num.map(|k| k * m),
        }
    }
}

impl PartialOrd for ValuationQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValuationQ {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num, other.num) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(_), Some(b)) => self.cmp_ratio(b, other.denominator()),
        }
    }
}

impl fmt::Display for ValuationQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.num {
            None => f.write_str("inf"),
            Some(k) => {
                let g = crate::arith::gcd(k, self.denominator()).max(1);
                let (a, b) = (k / g, self.denominator() / g);
                if b == 1 {
                    write!(f, "{a}")
                } else {
                    write!(f, "{a}/{b}")
                }
            }
        }
    }
}

impl Serialize for ValuationQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `|x| = odd_part · p_part` with `p_part` a power of `p` and `odd_part` prime to `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PDecomp {
    pub odd_part: u64,
    pub p_part: u64,
    /// `log_p(p_part)`.
    pub exponent: u32,
}

pub fn p_decompose(x: i64, p: u32) -> Result<PDecomp> {
    if x == 0 {
        return Err(Error::ZeroDecompose);
    }
    let p = p as u64;
    let mut odd = x.unsigned_abs();
    let mut pp = 1u64;
    let mut e = 0u32;
    while odd % p == 0 {
        odd /= p;
        pp *= p;
        e += 1;
    }
    Ok(PDecomp {
        odd_part: odd,
        p_part: pp,
        exponent: e,
    })
}
