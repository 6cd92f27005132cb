//! Small finite fields `F_{p^n}` backed by dense exp/log/trace tables.
//!
//! Elements are packed coefficient vectors: `Σ c_i·p^i` for the residue
//! `Σ c_i·x^i` modulo the field's defining polynomial. The modulus is the
//! lexicographically smallest monic irreducible (coefficients compared from the
//! constant term upward) and the generator is the first element of order `q-1`
//! in that same order, so tables are reproducible from `(p, n)` alone.

mod embed;
pub(crate) mod poly;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

pub use embed::SubfieldEmbedding;

/// Largest field order accepted by [`build_field`].
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    /// `n + 1` coefficients, constant term first, leading 1 last.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }

    /// Human readable modulus, e.g. `x^2 + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        terms.join(" + ")
    }
}

/// A field element in packed coefficient form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTables {
    spec: FieldSpec,
    q: u32,
    generator: Elem,
    /// `exp[i]` = packed form of `g^i`, `i ∈ [0, q-2]`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero packed `x`; `log[0]` is unused.
    log: Vec<u32>,
    trace: Vec<u32>,
    /// `p^i` for digit manipulation.
    radix: Vec<u32>,
}

/// Builds the canonical field of order `p^n`.
pub fn build_field(p: u32, n: u32) -> Result<FieldTables> {
    if !arith::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if n == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = match arith::checked_pow(p as u64, n) {
        Some(q) if q <= MAX_FIELD_ORDER => q as u32,
        _ => {
            return Err(Error::FieldTooLarge {
                p: p as u64,
                n,
                bound: MAX_FIELD_ORDER,
            })
        }
    };
    let radix: Vec<u32> = (0..n).map(|i| p.pow(i)).collect();
    let modulus = canonical_modulus(p, n, q);
    let unpack = |x: u32| -> Vec<u32> { (0..n).map(|i| x / radix[i as usize] % p).collect() };
    let pack = |c: &[u32]| -> u32 { c.iter().enumerate().map(|(i, &ci)| ci * radix[i]).sum() };

    let m = (q - 1) as u64;
    let factors = arith::prime_factors(m);
    let generator = (0..q)
        .map(|idx| lex_to_packed(idx, p, n))
        .filter(|&x| x != 0)
        .find(|&x| {
            let c = unpack(x);
            factors
                .iter()
                .all(|&r| poly::pow_mod(&c, m / r, &modulus, p) != [1])
        })
        .expect("a finite field has a primitive element");

    // Multiplication by g is F_p-linear: tabulate g·x^j and combine digits.
    let g = unpack(generator);
    let images: Vec<Vec<u32>> = (0..n as usize)
        .map(|j| {
            let mut xj = vec![0u32; j + 1];
            xj[j] = 1;
            let mut img = poly::mul_mod(&xj, &g, &modulus, p);
            img.resize(n as usize, 0);
            img
        })
        .collect();
    let mut exp = Vec::with_capacity(m as usize);
    let mut log = vec![0u32; q as usize];
    let mut record = |i: u32, x: u32| {
        exp.push(x);
        log[x as usize] = i;
    };
    let last = if p == 2 {
        let images: Vec<u32> = images.iter().map(|img| pack(img)).collect();
        let mut x = 1u32;
        for i in 0..m as u32 {
            record(i, x);
            x = images
                .iter()
                .enumerate()
                .filter(|(j, _)| x >> j & 1 == 1)
                .fold(0, |acc, (_, &v)| acc ^ v);
        }
        x
    } else {
        let mut cur = vec![0u32; n as usize];
        let mut next = vec![0u32; n as usize];
        cur[0] = 1;
        for i in 0..m as u32 {
            record(i, pack(&cur));
            next.iter_mut().for_each(|c| *c = 0);
            for (&cj, img) in cur.iter().zip(&images) {
                if cj == 0 {
                    continue;
                }
                for (dst, &v) in next.iter_mut().zip(img) {
                    *dst = (*dst + cj * v) % p;
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        pack(&cur)
    };
    debug_assert_eq!(last, 1, "generator order must be q-1");

    // Trace is F_p-linear: tabulate it on the power basis, extend linearly.
    let basis_trace: Vec<u32> = (0..n)
        .map(|i| {
            let mut xi = vec![0u32; i as usize + 1];
            xi[i as usize] = 1;
            let xi = poly::rem(&xi, &modulus, p);
            let mut acc: Vec<u32> = Vec::new();
            let mut conj = xi;
            for _ in 0..n {
                acc = poly::add(&acc, &conj, p);
                conj = poly::pow_mod(&conj, p as u64, &modulus, p);
            }
            debug_assert!(acc.len() <= 1, "trace lies in the prime field");
            acc.first().copied().unwrap_or(0)
        })
        .collect();
    let trace = (0..q)
        .map(|x| {
            let mut t = x;
            let mut acc = 0u32;
            for &bt in &basis_trace {
                acc = (acc + (t % p) * bt) % p;
                t /= p;
            }
            acc
        })
        .collect();

    Ok(FieldTables {
        spec: FieldSpec { p, n, modulus },
        q,
        generator: Elem(generator),
        exp,
        log,
        trace,
        radix,
    })
}

/// Maps a position in constant-term-first lexicographic order to packed form.
fn lex_to_packed(idx: u32, p: u32, n: u32) -> u32 {
    // idx written in base p with the constant coefficient as the top digit.
    let mut t = idx;
    let mut packed = 0u32;
    for i in (0..n).rev() {
        packed += (t % p) * p.pow(i);
        t /= p;
    }
    packed
}

fn canonical_modulus(p: u32, n: u32, q: u32) -> Vec<u32> {
    (0..q)
        .map(|idx| {
            let packed = lex_to_packed(idx, p, n);
            let mut f: Vec<u32> = (0..n).map(|i| packed / p.pow(i) % p).collect();
            f.push(1);
            f
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Inverse of `d` modulo `m` as a representative in `[1, m]`.
pub fn inverse_exponent(d: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::NotCoprime { d, modulus: m });
    }
    match arith::mod_inverse(d, m) {
        Some(0) => Ok(m),
        Some(x) => Ok(x),
        None => Err(Error::NotCoprime { d, modulus: m }),
    }
}

impl FieldTables {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    /// Field order `q`.
    pub fn order(&self) -> u32 {
        self.q
    }

    /// `|F*| = q - 1`, the length of every log-indexed vector.
    pub fn units(&self) -> usize {
        (self.q - 1) as usize
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    pub fn trace_table(&self) -> &[u32] {
        &self.trace
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(Elem)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    pub fn check(&self, x: Elem) -> Result<Elem> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::InvalidElement(x.0))
        }
    }

    /// `g^i` with `i` taken modulo `q - 1`.
    pub fn exp(&self, i: u64) -> Elem {
        Elem(self.exp[(i % (self.q as u64 - 1)) as usize])
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: Elem) -> Option<u32> {
        if x.is_zero() || !self.contains(x) {
            None
        } else {
            Some(self.log[x.0 as usize])
        }
    }

    /// Index form: 0 for zero, `i + 1` for `g^i`.
    pub fn to_index(&self, x: Elem) -> u32 {
        self.log(x).map_or(0, |l| l + 1)
    }

    pub fn from_index(&self, index: u32) -> Result<Elem> {
        match index {
            0 => Ok(Elem::ZERO),
            i if i < self.q => Ok(self.exp(i as u64 - 1)),
            i => Err(Error::InvalidElement(i)),
        }
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        self.radix.iter().map(|&r| x.0 / r % self.spec.p).collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() != self.spec.n as usize {
            return Err(Error::Length {
                expected: self.spec.n as usize,
                got: c.len(),
            });
        }
        if let Some(&bad) = c.iter().find(|&&ci| ci >= self.spec.p) {
            return Err(Error::InvalidElement(bad));
        }
        Ok(Elem(c.iter().zip(&self.radix).map(|(&ci, &r)| ci * r).sum()))
    }

    /// Embeds `k mod p` into the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.spec.p as i64) as u32)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for &r in &self.radix {
            out += ((x % p + y % p) % p) * r;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u32;
        for &r in &self.radix {
            out += ((p - x % p) % p) * r;
            x /= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let m = self.q - 1;
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(s % m as u64) as usize])
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let l = self.log(a)? as u64;
        let m = self.q as u64 - 1;
        Some(self.exp((m - l) % m))
    }

    /// `x^d` through the log table; negative `d` allowed for nonzero `x`.
    pub fn group_pow(&self, x: Elem, d: i64) -> Result<Elem> {
        self.check(x)?;
        if x.is_zero() {
            return if d > 0 {
                Ok(Elem::ZERO)
            } else {
                Err(Error::ZeroPower(d))
            };
        }
        let m = (self.q - 1) as i128;
        let e = (self.log[x.0 as usize] as i128 * d as i128).rem_euclid(m);
        Ok(self.exp(e as u64))
    }

    /// Absolute trace `Tr_{F/F_p}(x)` as a residue in `[0, p)`.
    pub fn trace(&self, x: Elem) -> u32 {
        self.trace[x.0 as usize]
    }

    /// Checks `gcd(d, q-1) = 1`.
    pub fn require_coprime(&self, d: i64) -> Result<()> {
        let m = (self.q - 1) as u64;
        if arith::gcd(d.unsigned_abs() % m.max(1), m) == 1 || m == 1 {
            Ok(())
        } else {
            Err(Error::NotCoprime { d, modulus: m })
        }
    }

    /// `d` is degenerate when it is a power of `p` modulo `q - 1`.
    pub fn is_degenerate(&self, d: u64) -> bool {
        let m = self.q as u64 - 1;
        if m == 1 {
            return true;
        }
        let target = d % m;
        let mut pk = 1 % m;
        for _ in 0..self.spec.n {
            if pk == target {
                return true;
            }
            pk = pk * self.spec.p as u64 % m;
        }
        false
    }
}
