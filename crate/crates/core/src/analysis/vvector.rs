use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff_core::{inverse_exponent, Elem, FieldSpec, FieldTables};
use crate::group_algebra::GAElem;

/// Coefficients of `V = Σ_{v∈F} [(v^d + (1-v)^d)^{1/d}]`, indexed by discrete log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VVector {
    pub field_spec: FieldSpec,
    pub d: u64,
    pub counts: Vec<u64>,
    pub v1: u64,
}

impl VVector {
    pub fn weight(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn sum_of_squares(&self) -> BigInt {
        self.counts.iter().map(|&c| BigInt::from(c) * c).sum()
    }

    /// `Σ_{u≠1} V_u`.
    pub fn sum_excluding_one(&self) -> u64 {
        self.weight() - self.v1
    }

    /// `Σ_{u≠1} V_u^2`.
    pub fn sum_of_squares_excluding_one(&self) -> BigInt {
        self.sum_of_squares() - BigInt::from(self.v1) * self.v1
    }

    pub fn to_element(&self, field: Arc<FieldTables>) -> Result<GAElem> {
        if field.spec() != &self.field_spec {
            return Err(Error::FieldMismatch);
        }
        let values: Vec<i64> = self.counts.iter().map(|&c| c as i64).collect();
        GAElem::from_integers(field, &values)
    }
}

pub fn v_vector(t: &FieldTables, d: i64) -> Result<VVector> {
    t.require_coprime(d)?;
    let m = t.units() as u64;
    let d_inv = inverse_exponent(d, m)?;
    let mut counts = vec![0u64; m as usize];
    for v in t.elements() {
        let s = t.add(t.group_pow(v, d)?, t.group_pow(t.sub(Elem::ONE, v), d)?);
        let Some(log_s) = t.log(s) else {
            return Err(Error::Invariant(format!(
                "v^d + (1-v)^d = 0 at v = {} for d = {d} over {}",
                v.0,
                t.spec().modulus_string()
            )));
        };
        counts[(log_s as u64 * d_inv % m) as usize] += 1;
    }
    let v1 = counts[0];
    Ok(VVector {
        field_spec: t.spec().clone(),
        d: crate::weil_engine::canonical_exponent(d, m),
        counts,
        v1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_core::build_field;

    #[test]
    fn weight_is_field_order() {
        for &(p, n) in &[(2, 3), (2, 4), (3, 2), (5, 2), (7, 1)] {
            let t = build_field(p, n).unwrap();
            let m = t.units() as i64;
            for d in 1..=m {
                if crate::arith::gcd(d as u64, m as u64) == 1 {
                    assert_eq!(v_vector(&t, d).unwrap().weight(), t.order() as u64);
                }
            }
        }
    }

    #[test]
    fn exponent_one_concentrates_on_identity() {
        let t = build_field(3, 2).unwrap();
        let v = v_vector(&t, 1).unwrap();
        assert_eq!(v.v1, 9);
        assert!(v.counts[1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn f9_matches_pairwise_count() {
        let t = build_field(3, 2).unwrap();
        let d = 5;
        let v = v_vector(&t, d).unwrap();
        let pow = |x: Elem| t.group_pow(x, d).unwrap();
        for u in t.elements().filter(|u| !u.is_zero()) {
            let ud = pow(u);
            let direct = t
                .elements()
                .filter(|&w| t.add(pow(w), pow(t.sub(Elem::ONE, w))) == ud)
                .count() as u64;
            assert_eq!(v.counts[t.log(u).unwrap() as usize], direct);
        }
    }

    #[test]
    fn rejects_shared_factor() {
        let t = build_field(3, 2).unwrap();
        assert!(matches!(v_vector(&t, 2), Err(Error::NotCoprime { .. })));
    }
}
