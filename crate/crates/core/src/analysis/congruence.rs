use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::ff_core::{Elem, FieldTables};

/// Residue of `V_1` modulo 6 and the branch of the case table that gave it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BarbaraBranch {
    pub residue: u8,
    pub label: &'static str,
}

pub const BARBARA_BRANCHES: [&str; 7] = [
    "q=0 mod 3",
    "q=1 mod 3, 2^(d-1)=1",
    "q=1 mod 3, 2^(d-1)!=1",
    "q=2 mod 3, 2^(d-1)=1",
    "q=2 mod 3, 2^(d-1)!=1",
    "p=2, n even",
    "p=2, n odd",
];

/// Predicted `V_1 mod 6`. The test `2^(d-1) = 1` is done in the field; in
/// characteristic 2 the element 2 is zero, so the `≠ 1` branch always applies.
pub fn v1_congruence_expected(t: &FieldTables, d: i64) -> Result<BarbaraBranch> {
    t.require_coprime(d)?;
    let q = t.order() as u64;
    let b = |residue, i: usize| BarbaraBranch {
        residue,
        label: BARBARA_BRANCHES[i],
    };
    if t.p() == 2 {
        return Ok(if q % 3 == 1 { b(4, 5) } else { b(2, 6) });
    }
    if q % 3 == 0 {
        return Ok(b(3, 0));
    }
    let m = t.units() as i64;
    let two = t.from_int(2);
    let two_pow_is_one = t.group_pow(two, (d - 1).rem_euclid(m))? == Elem::ONE;
    Ok(match (q % 3, two_pow_is_one) {
        (1, true) => b(1, 1),
        (1, false) => b(4, 2),
        (_, true) => b(5, 3),
        (_, false) => b(2, 4),
    })
}

/// Roots of `x^d + (1-x)^d - 1` in `F ∖ {0,1}` split into orbits of the group
/// generated by `x ↦ 1-x` and `x ↦ 1/x`.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub d: u64,
    /// `V_1 = 2 + #roots` (the points 0 and 1 always solve).
    pub v1: u64,
    pub roots: usize,
    pub orbit_sizes: Vec<usize>,
    /// Orbits of size below 6, as packed elements.
    pub short_orbits: Vec<Vec<u32>>,
    /// Points of `F ∖ {0,1}` with a nontrivial stabilizer: `-1, 2, 1/2` and
    /// the roots of `x^2 - x + 1`.
    pub special_points: Vec<u32>,
    pub minus_one_is_root: bool,
    /// `-1 = 2 = 1/2` (characteristic 3).
    pub specials_coincide: bool,
    pub phi6_roots: Vec<u32>,
    pub phi6_roots_are_roots: bool,
    /// Orbit sizes divide 6 and every short orbit consists of special points.
    pub consistent: bool,
}

fn orbit_images(t: &FieldTables, x: Elem) -> [Elem; 6] {
    let one_minus = |y: Elem| t.sub(Elem::ONE, y);
    let inv = |y: Elem| t.inv(y).expect("orbit stays in F ∖ {0,1}");
    let s = one_minus(x);
    let i = inv(x);
    [x, s, i, inv(s), one_minus(i), inv(one_minus(i))]
}

pub fn orbit_decomposition(t: &FieldTables, d: i64) -> Result<OrbitReport> {
    t.require_coprime(d)?;
    let outside = |x: Elem| x != Elem::ZERO && x != Elem::ONE;
    let f = |x: Elem| -> Result<bool> {
        Ok(t.add(t.group_pow(x, d)?, t.group_pow(t.sub(Elem::ONE, x), d)?) == Elem::ONE)
    };
    let mut roots = BTreeSet::new();
    for x in t.elements().filter(|&x| outside(x)) {
        if f(x)? {
            roots.insert(x);
        }
    }

    let phi6: Vec<Elem> = t
        .elements()
        .filter(|&x| outside(x))
        .filter(|&x| t.add(t.sub(t.mul(x, x), x), Elem::ONE) == Elem::ZERO)
        .collect();
    let minus_one = t.neg(Elem::ONE);
    let two = t.from_int(2);
    let mut special: BTreeSet<Elem> = phi6.iter().copied().collect();
    for x in [minus_one, two] {
        if outside(x) {
            special.insert(x);
            special.insert(t.inv(x).expect("nonzero"));
        }
    }

    let mut seen = BTreeSet::new();
    let mut orbit_sizes = Vec::new();
    let mut short_orbits = Vec::new();
    let mut consistent = true;
    for &x in &roots {
        if seen.contains(&x) {
            continue;
        }
        let orbit: BTreeSet<Elem> = orbit_images(t, x).into_iter().collect();
        consistent &= orbit.iter().all(|y| roots.contains(y));
        consistent &= 6 % orbit.len() == 0;
        if orbit.len() < 6 {
            consistent &= orbit.iter().all(|y| special.contains(y));
            short_orbits.push(orbit.iter().map(|e| e.0).collect());
        }
        orbit_sizes.push(orbit.len());
        seen.extend(orbit);
    }

    let half = t.inv(two);
    Ok(OrbitReport {
        d: crate::weil_engine::canonical_exponent(d, t.units() as u64),
        v1: 2 + roots.len() as u64,
        roots: roots.len(),
        orbit_sizes,
        short_orbits,
        special_points: special.iter().map(|e| e.0).collect(),
        minus_one_is_root: roots.contains(&minus_one),
        specials_coincide: outside(minus_one) && minus_one == two && Some(two) == half,
        phi6_roots: phi6.iter().map(|e| e.0).collect(),
        phi6_roots_are_roots: !phi6.is_empty() && phi6.iter().all(|x| roots.contains(x)),
        consistent,
    })
}
