//! Dense polynomials over `F_p`, coefficients low degree first. Only what
//! field construction needs: products modulo a monic modulus, powers and gcd.

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn add(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Remainder of `a` modulo a polynomial `m` with invertible leading coefficient.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Poly = prod.into_iter().map(|c| c as u32).collect();
    rem(&prod, m, p)
}

pub(crate) fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    crate::arith::mod_inverse(a as i64, p as u64).expect("nonzero residue mod prime") as u32
}

/// Rabin's test for a monic polynomial of degree `n ≥ 1` over `F_p`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = (f.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    // Any root in F_p (including 0) gives a linear factor.
    let has_root = (0..p).any(|a| {
        f.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * a as u64 + c as u64) % p as u64)
            == 0
    });
    if has_root {
        return false;
    }
    let x: Poly = vec![0, 1];
    // frob[k] = x^{p^k} mod f
    let mut frob = vec![rem(&x, f, p)];
    for k in 1..=n as usize {
        let next = pow_mod(&frob[k - 1], p as u64, f, p);
        frob.push(next);
    }
    if sub(&frob[n as usize], &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    for r in crate::arith::prime_factors(n as u64) {
        let k = (n as u64 / r) as usize;
        let h = sub(&frob[k], &x, p);
        let g = gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
