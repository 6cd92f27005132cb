use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::json;

use super::{CheckOutcome, Checks, VVector};
use crate::arith::gcd;
use crate::cyclotomic::{p_decompose, CycInt, PDecomp, ValuationQ};
use crate::error::{Error, Result};
use crate::ff_core::FieldSpec;
use crate::weil_engine::WeilSpectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CelineCase {
    /// `v_p(a), v_p(b) > n/2`.
    CaseI,
    /// `v_p(a) = v_p(b) = n/2` and `|a-b|` a power of `p` above `√q`.
    CaseIi,
}

/// A three-valued spectrum `{0, a, b}` with `a > 0 > b`.
#[derive(Clone, Debug, Serialize)]
pub struct ThreeValuedReport {
    pub field_spec: FieldSpec,
    pub d: u64,
    pub a: i64,
    pub b: i64,
    pub mult_a: u64,
    pub mult_b: u64,
    pub mult_zero: u64,
    pub val_a: ValuationQ,
    pub val_b: ValuationQ,
    pub celine_case: Option<CelineCase>,
    pub checks: Checks,
}

/// Values are integers, one of them is 0, and `d ≡ 1 (mod p-1)`.
pub fn check_imogene(s: &WeilSpectrum) -> Result<CheckOutcome> {
    if !s.is_three_valued() {
        return Err(Error::Precondition(format!(
            "spectrum has {} values, not 3",
            s.value_count()
        )));
    }
    let integers = s.integer_values().is_some();
    let has_zero = s.entries.iter().any(|(v, _)| v.is_zero());
    let p = s.p() as u64;
    let d_ok = (s.d as i64 - 1).rem_euclid((p - 1).max(1) as i64) == 0;
    let mut broken = Vec::new();
    if !integers {
        broken.push("values not rational integers");
    }
    if !has_zero {
        broken.push("0 is not a value");
    }
    if !d_ok {
        broken.push("d != 1 mod (p-1)");
    }
    Ok(CheckOutcome::new(
        broken.is_empty(),
        json!({"broken": broken, "d": s.d, "values": s.entries.iter().map(|(v, _)| v.to_string()).collect::<Vec<_>>()}),
    ))
}

impl ThreeValuedReport {
    /// Reads `a`, `b` off a three-valued spectrum. Fails unless the values are
    /// integers `{0, a, b}` with `a > 0 > b`.
    pub fn from_spectrum(s: &WeilSpectrum) -> Result<Self> {
        let imogene = check_imogene(s)?;
        let values = s
            .integer_values()
            .filter(|v| v.contains(&0))
            .ok_or_else(|| Error::Precondition(format!("not of the form {{0, a, b}}: {}", imogene.witness)))?;
        let a = *values.iter().max().expect("three values");
        let b = *values.iter().min().expect("three values");
        if !(a > 0 && b < 0) {
            return Err(Error::Precondition(format!(
                "nonzero values {a}, {b} do not have opposite signs"
            )));
        }
        let mult = |x: i64| s.multiplicity(&CycInt::from_int(s.p(), x));
        let mut report = Self::synthetic(s.field_spec.clone(), s.d, a, b, mult(a), mult(b))?;
        report.checks.insert("imogene".into(), imogene);
        Ok(report)
    }

    /// Report from explicit values, for negative controls. Requires `a > 0 > b`.
    pub fn synthetic(field_spec: FieldSpec, d: u64, a: i64, b: i64, mult_a: u64, mult_b: u64) -> Result<Self> {
        if !(a > 0 && b < 0) {
            return Err(Error::Precondition(format!("need a > 0 > b, got a={a}, b={b}")));
        }
        let p = field_spec.p;
        let q = field_spec.order();
        let val = |x: i64| -> Result<ValuationQ> {
            let e = p_decompose(x, p)?.exponent as u64;
            Ok(ValuationQ::finite(p, e * (p as u64 - 1).max(1)))
        };
        let mut checks = Checks::new();
        let (qa, qb, big_q) = (BigInt::from(a), BigInt::from(b), BigInt::from(q));
        let first = &qa * mult_a + &qb * mult_b;
        let second = &qa * &qa * mult_a + &qb * &qb * mult_b;
        checks.insert(
            "orestes_i_ii".into(),
            CheckOutcome::new(
                first == big_q && second == &big_q * &big_q,
                json!({"sum": first.to_string(), "sum_of_squares": second.to_string()}),
            ),
        );
        Ok(Self {
            val_a: val(a)?,
            val_b: val(b)?,
            field_spec,
            d,
            a,
            b,
            mult_a,
            mult_b,
            mult_zero: (q - 1).saturating_sub(mult_a + mult_b),
            celine_case: None,
            checks,
        })
    }

    pub fn p(&self) -> u32 {
        self.field_spec.p
    }

    pub fn n(&self) -> u32 {
        self.field_spec.n
    }

    pub fn q(&self) -> u64 {
        self.field_spec.order()
    }

    pub fn decompositions(&self) -> Result<(PDecomp, PDecomp, PDecomp)> {
        let p = self.p();
        Ok((
            p_decompose(self.a, p)?,
            p_decompose(self.b, p)?,
            p_decompose(self.a - self.b, p)?,
        ))
    }

    /// Runs every structural check against the spectrum and `V`, recording
    /// each under its name. A classification that should be impossible is
    /// recorded as a failed `celine` check carrying the error text.
    pub fn run_checks(&mut self, s: &WeilSpectrum, v: &VVector) {
        let theresa = check_theresa(self, s).unwrap_or_else(|e| CheckOutcome::fail(json!({"error": e.to_string()})));
        self.checks.insert("theresa".into(), theresa);
        self.checks.insert("victor".into(), victor_check(self, v.v1));
        self.checks.insert("wilbur".into(), wilbur_check(self, v));
        self.checks.insert("zachary".into(), zachary_check(self, v));
        self.checks.insert("alexandra".into(), alexandra_check(self));
        let celine = match celine_classify(self, v) {
            Ok((case, outcome)) => {
                self.celine_case = Some(case);
                outcome
            }
            Err(e) => CheckOutcome::fail(json!({"error": e.to_string()})),
        };
        self.checks.insert("celine".into(), celine);
    }

    pub fn all_pass(&self) -> bool {
        super::all_pass(&self.checks)
    }
}

/// `Σ W_u^k` for a three-valued spectrum `{0, a, b}` over a field of order `q`,
/// evaluated with exact division by `a - b`.
pub fn predicted_moment(a: i64, b: i64, q: u64, k: u32) -> Result<BigInt> {
    if a == b {
        return Err(Error::Precondition("a = b".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let (a, b, q) = (BigInt::from(a), BigInt::from(b), BigInt::from(q));
    let first = &q * &q * (a.pow(k - 1) - b.pow(k - 1));
    // a·b·(a^{k-2} - b^{k-2}) equals b - a when k = 1.
    let second = if k >= 2 {
        &a * &b * (a.pow(k - 2) - b.pow(k - 2))
    } else {
        &b - &a
    };
    let numerator = first - &q * second;
    let (quot, rem) = numerator.div_rem(&(&a - &b));
    if !rem.is_zero() {
        return Err(Error::InexactDivision(format!("{numerator} / {}", a - b)));
    }
    Ok(quot)
}

/// Closed-form moments `k = 1..6` against the spectrum's exact moments.
pub fn check_theresa(r: &ThreeValuedReport, s: &WeilSpectrum) -> Result<CheckOutcome> {
    let mut rows = Vec::new();
    let mut pass = true;
    for k in 1..=6 {
        let predicted = predicted_moment(r.a, r.b, r.q(), k)?;
        let actual = s.moment(k).is_rational_integer();
        let ok = actual.as_ref() == Some(&predicted);
        pass &= ok;
        rows.push(json!({"k": k, "predicted": predicted.to_string(), "actual": s.moment(k).to_string(), "pass": ok}));
    }
    Ok(CheckOutcome::new(pass, json!({"moments": rows})))
}

/// `V_1 = a + b - ab/q` with `ab/q` integral, and `v_p(ab) ≥ n` (strict for `p ∈ {2,3}`).
pub fn victor_check(r: &ThreeValuedReport, v1: u64) -> CheckOutcome {
    let q = r.q() as i128;
    let ab = r.a as i128 * r.b as i128;
    let integral = ab % q == 0;
    let expected = r.a as i128 + r.b as i128 - ab / q;
    let v_ab = r.val_a.plus(&r.val_b);
    let n = r.n() as u64;
    let bound = if r.p() <= 3 {
        v_ab.cmp_ratio(n, 1).is_gt()
    } else {
        v_ab.cmp_ratio(n, 1).is_ge()
    };
    CheckOutcome::new(
        integral && expected == v1 as i128 && bound,
        json!({
            "v1": v1,
            "a_plus_b_minus_ab_over_q": expected.to_string(),
            "ab_divisible_by_q": integral,
            "v_p_ab": v_ab.to_string(),
            "n": n,
            "strict": r.p() <= 3,
        }),
    )
}

/// `Σ_{u≠1} V_u = (q-a)(q-b)/q > 0` and `Σ_{u≠1} V_u^2 = -ab(q-a)(q-b)/q^2 > 0`.
pub fn wilbur_check(r: &ThreeValuedReport, v: &VVector) -> CheckOutcome {
    let (a, b, q) = (BigInt::from(r.a), BigInt::from(r.b), BigInt::from(r.q()));
    let prod = (&q - &a) * (&q - &b);
    let (s1, rem1) = prod.div_rem(&q);
    let (s2, rem2) = (-(&a * &b) * &prod).div_rem(&(&q * &q));
    let lhs1 = BigInt::from(v.sum_excluding_one());
    let lhs2 = v.sum_of_squares_excluding_one();
    let bounded = a.abs() < q && b.abs() < q;
    let pass = rem1.is_zero()
        && rem2.is_zero()
        && lhs1 == s1
        && lhs2 == s2
        && s1 > BigInt::zero()
        && s2 > BigInt::zero()
        && bounded;
    CheckOutcome::new(
        pass,
        json!({
            "sum": lhs1.to_string(),
            "sum_expected": s1.to_string(),
            "sum_of_squares": lhs2.to_string(),
            "sum_of_squares_expected": s2.to_string(),
            "exact": rem1.is_zero() && rem2.is_zero(),
            "abs_values_below_q": bounded,
        }),
    )
}

/// `a_o`, `b_o`, `(a-b)_o` pairwise coprime, and their product divides every `V_u`, `u ≠ 1`.
pub fn zachary_check(r: &ThreeValuedReport, v: &VVector) -> CheckOutcome {
    let (da, db, dd) = match r.decompositions() {
        Ok(x) => x,
        Err(e) => return CheckOutcome::fail(json!({"error": e.to_string()})),
    };
    let (ao, bo, dio) = (da.odd_part, db.odd_part, dd.odd_part);
    let coprime = gcd(ao, bo) == 1 && gcd(ao, dio) == 1 && gcd(bo, dio) == 1;
    let divisor = ao as u128 * bo as u128 * dio as u128;
    let offender = if coprime {
        v.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c as u128 % divisor != 0)
    } else {
        None
    };
    CheckOutcome::new(
        coprime && offender.is_none(),
        json!({
            "a_o": ao,
            "b_o": bo,
            "a_minus_b_o": dio,
            "pairwise_coprime": coprime,
            "divisor": divisor.to_string(),
            "offender": offender.map(|(i, c)| json!({"log_index": i, "count": c})),
        }),
    )
}

/// `a_p·b_p ≥ q·(a-b)_o`.
pub fn alexandra_check(r: &ThreeValuedReport) -> CheckOutcome {
    match r.decompositions() {
        Ok((da, db, dd)) => {
            let lhs = da.p_part as u128 * db.p_part as u128;
            let rhs = r.q() as u128 * dd.odd_part as u128;
            CheckOutcome::new(lhs >= rhs, json!({"a_p_b_p": lhs.to_string(), "q_times_diff_o": rhs.to_string()}))
        }
        Err(e) => CheckOutcome::fail(json!({"error": e.to_string()})),
    }
}

/// Classifies the report into the two possible cases. Case (ii) also checks
/// `V_u ∈ {0, a_o b_o}` for `u ≠ 1` and `V_1 = a + b + a_o b_o`. Case (ii) in
/// characteristic 2 or 3, or neither case, is an error.
pub fn celine_classify(r: &ThreeValuedReport, v: &VVector) -> Result<(CelineCase, CheckOutcome)> {
    let imogene_ok = r.checks.get("imogene").map_or(true, |c| c.pass);
    if !imogene_ok {
        return Err(Error::Precondition("report fails the integrality preconditions".into()));
    }
    let (da, db, dd) = r.decompositions()?;
    let n = r.n() as u64;
    let (ea, eb) = (da.exponent as u64, db.exponent as u64);
    let witness = json!({
        "a": r.a, "b": r.b, "n": n,
        "v_p_a": r.val_a.to_string(), "v_p_b": r.val_b.to_string(),
        "a_minus_b": r.a - r.b,
    });
    if 2 * ea > n && 2 * eb > n {
        return Ok((CelineCase::CaseI, CheckOutcome::pass(witness)));
    }
    let diff = (r.a - r.b) as u128;
    if 2 * ea == n && 2 * eb == n && dd.odd_part == 1 && diff * diff > r.q() as u128 {
        if r.p() <= 3 {
            return Err(Error::Invariant(format!(
                "case (ii) in characteristic {}: {witness}",
                r.p()
            )));
        }
        let aobo = da.odd_part * db.odd_part;
        let bad_u = v.counts.iter().skip(1).position(|&c| c != 0 && c != aobo);
        let v1_ok = v.v1 as i128 == r.a as i128 + r.b as i128 + aobo as i128;
        let mut w = witness;
        w["a_o_b_o"] = json!(aobo);
        w["v1"] = json!(v.v1);
        w["offending_log_index"] = json!(bad_u.map(|i| i + 1));
        return Ok((CelineCase::CaseIi, CheckOutcome::new(bad_u.is_none() && v1_ok, w)));
    }
    Err(Error::Invariant(format!("neither case applies: {witness}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::v_vector;
    use crate::weil_engine::{weil_spectrum, FieldContext, NaiveMethod};

    fn f32_d13() -> (WeilSpectrum, VVector) {
        let ctx = FieldContext::build(2, 5).unwrap();
        let s = weil_spectrum(&ctx, 13, &NaiveMethod).unwrap();
        let v = v_vector(ctx.field(), 13).unwrap();
        (s, v)
    }

    #[test]
    fn f32_d13_report() {
        let (s, v) = f32_d13();
        let mut r = ThreeValuedReport::from_spectrum(&s).unwrap();
        assert_eq!((r.a, r.b), (8, -8));
        assert_eq!(r.mult_a + r.mult_b + r.mult_zero, 31);
        assert_eq!(v.v1, 2);
        r.run_checks(&s, &v);
        assert!(r.all_pass(), "{:?}", r.checks);
        assert_eq!(r.celine_case, Some(CelineCase::CaseI));
        assert!(r.val_a.equals_ratio(3, 1));
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(predicted_moment(8, -8, 32, 1).unwrap(), BigInt::from(32));
        assert_eq!(predicted_moment(8, -8, 32, 2).unwrap(), BigInt::from(1024));
        assert_eq!(predicted_moment(8, -8, 32, 3).unwrap(), BigInt::from(32 * 64));
        assert!(predicted_moment(4, 4, 16, 3).is_err());
        let (s, _) = f32_d13();
        for k in 1..=6 {
            assert_eq!(
                s.moment(k).is_rational_integer().unwrap(),
                predicted_moment(8, -8, 32, k).unwrap()
            );
        }
    }

    #[test]
    fn perturbed_v1_fails() {
        let (s, v) = f32_d13();
        let r = ThreeValuedReport::from_spectrum(&s).unwrap();
        assert!(victor_check(&r, v.v1).pass);
        assert!(!victor_check(&r, v.v1 + 6).pass);
    }

    #[test]
    fn shared_odd_part_rejected() {
        let (s, v) = f32_d13();
        let r = ThreeValuedReport::synthetic(s.field_spec.clone(), 13, 6, -3, 1, 1).unwrap();
        let out = zachary_check(&r, &v);
        assert!(!out.pass);
        assert_eq!(out.witness["pairwise_coprime"], json!(false));
    }

    #[test]
    fn non_three_valued_rejected() {
        let ctx = FieldContext::build(2, 4).unwrap();
        let s = weil_spectrum(&ctx, 7, &NaiveMethod).unwrap();
        assert!(!s.is_three_valued());
        assert!(ThreeValuedReport::from_spectrum(&s).is_err());
        assert!(check_imogene(&s).is_err());
    }

    #[test]
    fn spectrum_without_zero_fails_imogene() {
        let (s, _) = f32_d13();
        let entries = vec![
            (CycInt::from_int(2, 8), 10),
            (CycInt::from_int(2, -8), 10),
            (CycInt::from_int(2, 4), 11),
        ];
        let fake = WeilSpectrum::from_entries(s.field_spec.clone(), 13, entries).unwrap();
        let out = check_imogene(&fake).unwrap();
        assert!(!out.pass);
        assert!(ThreeValuedReport::from_spectrum(&fake).is_err());
    }

    #[test]
    fn case_two_in_small_characteristic_is_an_error() {
        let (s, v) = f32_d13();
        let mut spec = s.field_spec.clone();
        spec.n = 4;
        let r = ThreeValuedReport::synthetic(spec, 7, 4, -4, 1, 1).unwrap();
        assert!(matches!(celine_classify(&r, &v), Err(Error::Invariant(_))));
    }
}
