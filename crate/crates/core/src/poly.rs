//! Dense polynomials over a prime field F_p.
//!
//! Coefficients are stored constant term first. These routines back the
//! modulus checks (irreducibility, primitivity) and the table-free element
//! arithmetic used to cross-check the log/antilog tables in [`crate::field`].

use crate::numtheory::{pow_mod, prime_factors};

pub type Poly = Vec<u32>;

/// Drop trailing zero coefficients. The zero polynomial becomes empty.
pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    pow_mod(u64::from(a), u64::from(p) - 2, u64::from(p)) as u32
}

pub fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
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

/// Remainder of `a` modulo `m` (`m` nonzero).
pub fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let dm = degree(m).expect("modulus must be nonzero");
    let lead_inv = u64::from(inv_mod_p(m[dm], p));
    let p64 = u64::from(p);
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    let mut top = r.len();
    while top > dm {
        let c = r[top - 1] % p64;
        if c != 0 {
            let factor = c * lead_inv % p64;
            let shift = top - 1 - dm;
            for (i, &mc) in m[..=dm].iter().enumerate() {
                let v = factor * u64::from(mc) % p64;
                r[shift + i] = (r[shift + i] + p64 - v) % p64;
            }
        }
        top -= 1;
    }
    r.truncate(dm);
    trim(r.into_iter().map(|c| (c % p64) as u32).collect())
}

pub fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = u64::from(p);
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

/// `base^k mod m` by square-and-multiply.
pub fn pow_mod_poly(base: &[u32], mut k: u128, m: &[u32], p: u32) -> Poly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        k >>= 1;
    }
    acc
}

pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

const X: [u32; 2] = [0, 1];

/// Rabin's test: `f` of degree `d` is irreducible over F_p iff
/// `x^{p^d} = x mod f` and `gcd(x^{p^{d/l}} - x, f) = 1` for every prime `l | d`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x_mod = rem(&X, f, p);
    let frob = |times: usize| -> Poly {
        let mut acc = x_mod.clone();
        for _ in 0..times {
            acc = pow_mod_poly(&acc, u128::from(p), f, p);
        }
        acc
    };
    if frob(d) != x_mod {
        return false;
    }
    for l in prime_factors(d as u64) {
        let h = frob(d / l as usize);
        let g = gcd(&sub(&h, &x_mod, p), f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Whether the class of `g` has multiplicative order exactly `p^d - 1` in F_p[x]/(f).
/// `f` must be irreducible of degree `d`.
pub fn has_full_order(g: &[u32], f: &[u32], p: u32) -> bool {
    let d = degree(f).expect("nonzero modulus") as u32;
    let order = u128::from(p).pow(d) - 1;
    let one: Poly = vec![1];
    let g = rem(g, f, p);
    if g.is_empty() || pow_mod_poly(&g, order, f, p) != one {
        return false;
    }
    prime_factors(order as u64)
        .into_iter()
        .all(|l| pow_mod_poly(&g, order / u128::from(l), f, p) != one)
}

/// Irreducible with `x` a generator of the multiplicative group.
pub fn is_primitive(f: &[u32], p: u32) -> bool {
    is_irreducible(f, p) && has_full_order(&X, f, p)
}

/// Evaluate `g` (coefficients in F_p) at the residue class `v` modulo `f`.
pub fn compose_mod(g: &[u32], v: &[u32], f: &[u32], p: u32) -> Poly {
    let mut acc: Poly = Vec::new();
    for &c in g.iter().rev() {
        acc = mul_mod(&acc, v, f, p);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = (acc[0] + c) % p;
        acc = trim(acc);
    }
    acc
}

/// Parse "c0,c1,...,cd" (constant term first).
pub fn parse_coeffs(s: &str) -> Result<Poly, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|e| format!("bad coefficient {t:?}: {e}"))
        })
        .collect()
}

pub fn format_coeffs(a: &[u32]) -> String {
    a.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}
