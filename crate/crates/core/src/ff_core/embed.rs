use std::collections::HashMap;

use crate::error::{Error, Result};

use super::{Elem, FieldTables};

/// Field embedding `K → L` between independently built tables.
///
/// The map is the exponent map `log_L(ι(x)) = log_K(x)·s·(|L*|/|K*|)`. The
/// plain `s = 1` map is a group isomorphism onto the subfield but need not be
/// additive, because the two canonical generators are unrelated; the smallest
/// unit `s` modulo `|K*|` for which the map is additive is used instead.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    degree: u32,
    stride: u64,
    twist: u64,
    map: Vec<Elem>,
}

impl SubfieldEmbedding {
    pub fn new(k: &FieldTables, l: &FieldTables) -> Result<Self> {
        if k.p() != l.p() || l.n() % k.n() != 0 {
            return Err(Error::NotSubfield(format!(
                "F_{}^{} in F_{}^{}",
                k.p(),
                k.n(),
                l.p(),
                l.n()
            )));
        }
        let k_units = k.units() as u64;
        let stride = l.units() as u64 / k_units;
        let basis: Vec<Elem> = (0..k.n())
            .map(|i| {
                let mut c = vec![0u32; k.n() as usize];
                c[i as usize] = 1;
                k.from_coeffs(&c).expect("basis vector")
            })
            .collect();
        for twist in 1..=k_units {
            if crate::arith::gcd(twist, k_units) != 1 {
                continue;
            }
            let map: Vec<Elem> = k
                .elements()
                .map(|x| match k.log(x) {
                    None => Elem::ZERO,
                    Some(e) => l.exp(e as u64 * twist % k_units * stride),
                })
                .collect();
            let additive = basis.iter().all(|&b| {
                k.elements().all(|a| {
                    let lhs = map[k.add(a, b).0 as usize];
                    lhs == l.add(map[a.0 as usize], map[b.0 as usize])
                })
            });
            if additive {
                return Ok(Self {
                    degree: l.n() / k.n(),
                    stride,
                    twist,
                    map,
                });
            }
        }
        Err(Error::Invariant(
            "no additive exponent map between subfield tables".into(),
        ))
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x.0 as usize]
    }

    /// `[L:K]`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `|L*| / |K*|`.
    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn twist(&self) -> u64 {
        self.twist
    }

    fn trace_in_l(&self, k: &FieldTables, l: &FieldTables, y: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut c = y;
        for _ in 0..self.degree {
            acc = l.add(acc, c);
            c = l.group_pow(c, k.order() as i64).unwrap_or(Elem::ZERO);
        }
        acc
    }

    /// `Tr_{L/K}(y) = Σ_{i<[L:K]} y^{|K|^i}`, pulled back into `K`.
    pub fn relative_trace(&self, k: &FieldTables, l: &FieldTables, y: Elem) -> Option<Elem> {
        let acc = self.trace_in_l(k, l, y);
        self.map.iter().position(|&e| e == acc).map(|i| Elem(i as u32))
    }

    /// Checks `Tr_{L/F_p} = Tr_{K/F_p} ∘ Tr_{L/K}` on every element of `L`.
    pub fn traces_compose(&self, k: &FieldTables, l: &FieldTables) -> bool {
        let preimage: HashMap<Elem, Elem> = self
            .map
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, Elem(i as u32)))
            .collect();
        l.elements().all(|y| match preimage.get(&self.trace_in_l(k, l, y)) {
            Some(&t) => k.trace(t) == l.trace(y),
            None => false,
        })
    }
}
