//! Canonical moduli for the tower construction.
//!
//! The embedded table holds Conway polynomials for the small odd primes and
//! even degrees that fit in memory as full log tables. Outside the table the
//! fallback is the smallest primitive polynomial, ordered by the integer
//! `f_0 + f_1 p + ... + f_{d-1} p^{d-1}`.

use crate::poly::{self, Poly};

/// `(p, d, coefficients constant-first)`.
const CONWAY: &[(u32, usize, &[u32])] = &[
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (3, 8, &[2, 2, 2, 0, 1, 2, 0, 0, 1]),
    (3, 12, &[2, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (5, 6, &[2, 0, 1, 4, 1, 0, 1]),
    (5, 8, &[2, 4, 3, 0, 1, 0, 0, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
    (7, 6, &[3, 6, 4, 5, 1, 0, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 4, &[2, 10, 8, 0, 1]),
    (13, 1, &[11, 1]),
    (13, 2, &[2, 12, 1]),
    (13, 4, &[2, 12, 3, 0, 1]),
];

pub fn conway_polynomial(p: u32, d: usize) -> Option<Poly> {
    CONWAY
        .iter()
        .find(|(cp, cd, _)| *cp == p && *cd == d)
        .map(|(_, _, c)| c.to_vec())
}

/// Every `(p, d)` pair with an embedded Conway polynomial.
pub fn conway_table() -> impl Iterator<Item = (u32, usize, Poly)> {
    CONWAY.iter().map(|(p, d, c)| (*p, *d, c.to_vec()))
}

/// Smallest primitive polynomial of degree `d` over F_p in integer order.
pub fn smallest_primitive(p: u32, d: usize) -> Poly {
    let count = u64::from(p).pow(d as u32);
    for code in 1..count {
        let mut f = vec![0u32; d + 1];
        let mut c = code;
        for slot in f.iter_mut().take(d) {
            *slot = (c % u64::from(p)) as u32;
            c /= u64::from(p);
        }
        f[d] = 1;
        if f[0] != 0 && poly::is_primitive(&f, p) {
            return f;
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

/// Recomputes the Conway polynomial from its definition: the least primitive
/// polynomial, under Conway's signed lexicographic order, whose root maps onto
/// the Conway root of every proper subfield. Divisor polynomials are taken
/// from the embedded table or searched recursively.
pub fn conway_search(p: u32, d: usize) -> Poly {
    let divisors: Vec<(usize, Poly)> = (1..d)
        .filter(|k| d.is_multiple_of(*k))
        .map(|k| (k, conway_polynomial(p, k).unwrap_or_else(|| conway_search(p, k))))
        .collect();
    let order = u128::from(p).pow(d as u32) - 1;
    let total = u64::from(p).pow(d as u32);
    for code in 0..total {
        // digits c_1..c_d, c_1 most significant
        let mut digits = vec![0u32; d];
        let mut c = code;
        for slot in digits.iter_mut().rev() {
            *slot = (c % u64::from(p)) as u32;
            c /= u64::from(p);
        }
        let mut f = vec![0u32; d + 1];
        f[d] = 1;
        for (i, &ci) in digits.iter().enumerate() {
            let i = i + 1;
            f[d - i] = if i % 2 == 0 { ci } else { (p - ci) % p };
        }
        if f[0] == 0 || !poly::is_primitive(&f, p) {
            continue;
        }
        let compatible = divisors.iter().all(|(k, g)| {
            let sub_order = u128::from(p).pow(*k as u32) - 1;
            let root = poly::pow_mod_poly(&[0, 1], order / sub_order, &f, p);
            poly::compose_mod(g, &root, &f, p).is_empty()
        });
        if compatible {
            return f;
        }
    }
    unreachable!("Conway polynomials exist for every (p, d)")
}
