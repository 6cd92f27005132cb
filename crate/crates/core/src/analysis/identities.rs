use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::json;

use super::{CheckOutcome, VVector};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::ff_core::FieldTables;
use crate::group_algebra::{Convolver, GAElem};
use crate::weil_engine::WeilValues;

fn compare(lhs: &GAElem, rhs: &GAElem, what: &str) -> CheckOutcome {
    match lhs.first_difference(rhs) {
        None => CheckOutcome::pass(json!({"identity": what})),
        Some(i) => CheckOutcome::fail(json!({
            "identity": what,
            "log_index": i,
            "lhs": lhs.coeffs()[i].to_string(),
            "rhs": rhs.coeffs()[i].to_string(),
        })),
    }
}

/// `W = Ψ·Ψ^{(-1/d)} + F*` with the given convolver, against per-`u` values.
pub fn check_aaron(values: &WeilValues, conv: &dyn Convolver) -> Result<CheckOutcome> {
    let field = values.field().clone();
    let built = GAElem::weil_with(field, values.d() as i64, conv)?;
    Ok(compare(&values.to_element(), &built, "W = Psi Psi^(-1/d) + F*"))
}

/// `Ψ^{(t)}·conj(Ψ^{(t)}) = q[1] - F*` for `gcd(t, q-1) = 1`.
pub fn check_bartholomew(field: &Arc<FieldTables>, t: i64, conv: &dyn Convolver) -> Result<CheckOutcome> {
    field.require_coprime(t)?;
    let psi_t = GAElem::psi(field.clone()).reindex_power(t);
    let lhs = conv.convolve(&psi_t, &psi_t.conjugate())?;
    let q = BigInt::from(field.order());
    let rhs = GAElem::identity(field.clone())
        .scale(&q)
        .checked_sub(&GAElem::all_units(field.clone()))?;
    let mut out = compare(&lhs, &rhs, "Psi^(t) conj(Psi^(t)) = q - F*");
    out.witness["t"] = json!(t);
    Ok(out)
}

/// `W·conj(W) = q^2[1]`.
pub fn check_william(w: &GAElem, conv: &dyn Convolver) -> Result<CheckOutcome> {
    let field = w.field().clone();
    let lhs = conv.convolve(w, &w.conjugate())?;
    let q = BigInt::from(field.order());
    let rhs = GAElem::identity(field).scale(&(&q * &q));
    Ok(compare(&lhs, &rhs, "W conj(W) = q^2"))
}

/// `X = W·V` where `X = Σ W_u^2 [u]`.
pub fn check_ursula(w: &GAElem, v: &VVector, conv: &dyn Convolver) -> Result<CheckOutcome> {
    if w.field().spec() != &v.field_spec {
        return Err(Error::FieldMismatch);
    }
    let x = w.map_coeffs(|c: &CycInt| c * c);
    let wv = conv.convolve(w, &v.to_element(w.field().clone())?)?;
    Ok(compare(&wv, &x, "X = W V"))
}
