//! The field tower F_p ⊂ F_q ⊂ F_{q^r}.
//!
//! All elements live in a single degree-`e·r` extension of F_p, stored as
//! packed base-`p` coordinates in the polynomial basis `1, x, …, x^{er-1}`.
//! F_q and F_p are recognised as Frobenius-fixed subfields. Multiplication
//! goes through log/antilog tables built from the fixed primitive element
//! `eta`; addition is coordinate-wise.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conway;
use crate::numtheory::{gcd, is_prime, prime_factors};
use crate::poly::{self, Poly};

/// Largest field order for which the tower builds full tables.
pub const MAX_ORDER: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("characteristic 2 is not supported; p must be odd")]
    EvenCharacteristic,
    #[error("extension degree r = {0} must be even and at least 2")]
    OddExtension(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field of order {order} exceeds the table limit {MAX_ORDER}")]
    TooLarge { order: u128 },
    #[error("modulus {0} is not irreducible")]
    ReducibleModulus(String),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation is undefined at zero")]
    ZeroInput,
    #[error("element is not in the requested subfield")]
    NotInSubfield,
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

/// An element of F_{q^r}: the integer `c_0 + c_1 p + … + c_{d-1} p^{d-1}`
/// for polynomial-basis coordinates `c_i ∈ [0, p)`.
///
/// F_p is embedded as the constants `0..p`, so the packed value of a prime
/// field element is the element itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusSource {
    Conway,
    SmallestPrimitive,
    User,
}

/// Target of a trace map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMap {
    /// Tr_{q^r/q}: x ↦ x + x^q + … + x^{q^{r-1}}.
    ToQ,
    /// Tr_{q/p}, defined only on F_q.
    QToP,
    /// Tr_{q^r/p}.
    ToP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subfield {
    Q,
    P,
}

/// Enough to rebuild a tower bit-for-bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerProvenance {
    pub p: u32,
    pub e: u32,
    pub r: u32,
    pub q: u64,
    pub order: u64,
    pub modulus: String,
    pub modulus_source: ModulusSource,
    pub eta: String,
}

#[derive(Debug)]
pub struct Tower {
    p: u32,
    e: u32,
    r: u32,
    degree: usize,
    q: u64,
    order: u64,
    modulus: Poly,
    modulus_source: ModulusSource,
    eta: FieldElement,
    group_primes: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace_q: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

impl Tower {
    /// Build the tower for `q = p^e` and the degree-`r` extension of F_q.
    ///
    /// Without an explicit modulus the Conway polynomial of degree `e·r` is
    /// used when embedded, else the smallest primitive polynomial. `eta` is
    /// the class of `x` when that is primitive, otherwise the smallest
    /// primitive element in packed order.
    pub fn build(p: u32, e: u32, r: u32, modulus: Option<&[u32]>) -> Result<Self, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if !is_prime(u64::from(p)) {
            return Err(FieldError::NonPrime(p));
        }
        if r < 2 || !r.is_multiple_of(2) {
            return Err(FieldError::OddExtension(r));
        }
        if e == 0 {
            return Err(FieldError::InvalidParameter("e must be positive".into()));
        }
        let degree = (e * r) as usize;
        let big = u128::from(p).checked_pow(e * r).unwrap_or(u128::MAX);
        if big > u128::from(MAX_ORDER) {
            return Err(FieldError::TooLarge { order: big });
        }
        let order = big as u64;
        let q = u64::from(p).pow(e);

        let (modulus, modulus_source) = match modulus {
            Some(m) => {
                check_modulus(m, p, degree)?;
                (m.to_vec(), ModulusSource::User)
            }
            None => match conway::conway_polynomial(p, degree) {
                Some(m) => (m, ModulusSource::Conway),
                None => (conway::smallest_primitive(p, degree), ModulusSource::SmallestPrimitive),
            },
        };

        let eta_poly = if poly::has_full_order(&[0, 1], &modulus, p) {
            vec![0, 1]
        } else {
            (2..order)
                .map(|i| unpack(i as u32, p, degree))
                .find(|g| poly::has_full_order(g, &modulus, p))
                .expect("the multiplicative group of a finite field is cyclic")
        };

        let mut tower = Tower {
            p,
            e,
            r,
            degree,
            q,
            order,
            eta: FieldElement(pack(&eta_poly, p)),
            modulus,
            modulus_source,
            group_primes: prime_factors(order - 1),
            exp: Vec::new(),
            log: Vec::new(),
            trace_q: Vec::new(),
        };
        tower.fill_tables(&eta_poly);
        Ok(tower)
    }

    fn fill_tables(&mut self, eta_poly: &[u32]) {
        let group = (self.order - 1) as usize;
        let mut exp = vec![0u32; group];
        let mut log = vec![NO_LOG; self.order as usize];
        let mut cur: Poly = vec![1];
        for (k, slot) in exp.iter_mut().enumerate() {
            let packed = pack(&cur, self.p);
            debug_assert_eq!(log[packed as usize], NO_LOG, "eta is not primitive");
            *slot = packed;
            log[packed as usize] = k as u32;
            cur = poly::mul_mod(&cur, eta_poly, &self.modulus, self.p);
        }
        self.exp = exp;
        self.log = log;
        let trace_q = (0..self.order as u32)
            .map(|i| self.trace_by_definition(FieldElement(i), self.r, self.e).0)
            .collect();
        self.trace_q = trace_q;
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Degree `e·r` of F_{q^r} over F_p.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `Q = q^r`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `Q - 1`.
    pub fn group_order(&self) -> u64 {
        self.order - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_source(&self) -> ModulusSource {
        self.modulus_source
    }

    pub fn eta(&self) -> FieldElement {
        self.eta
    }

    /// Distinct primes dividing `Q - 1`.
    pub fn group_primes(&self) -> &[u64] {
        &self.group_primes
    }

    pub fn provenance(&self) -> TowerProvenance {
        TowerProvenance {
            p: self.p,
            e: self.e,
            r: self.r,
            q: self.q,
            order: self.order,
            modulus: poly::format_coeffs(&self.modulus),
            modulus_source: self.modulus_source,
            eta: poly::format_coeffs(&self.coeffs(self.eta)),
        }
    }

    // ---- element construction -------------------------------------------------

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() > self.degree {
            return Err(FieldError::InvalidElement(format!(
                "{} coordinates for a degree-{} field",
                coeffs.len(),
                self.degree
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::InvalidElement(format!("coordinate {c} ≥ p")));
        }
        Ok(FieldElement(pack(coeffs, self.p)))
    }

    pub fn from_index(&self, index: u32) -> Result<FieldElement, FieldError> {
        if u64::from(index) >= self.order {
            return Err(FieldError::InvalidElement(format!("index {index} ≥ {}", self.order)));
        }
        Ok(FieldElement(index))
    }

    /// Embedded prime-field constant `c mod p`.
    pub fn constant(&self, c: u64) -> FieldElement {
        FieldElement((c % u64::from(self.p)) as u32)
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        unpack(x.0, self.p, self.degree)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order as u32).map(FieldElement)
    }

    /// Nonzero elements in the order `eta^0, eta^1, …`.
    pub fn powers_of_eta(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.exp.iter().map(|&i| FieldElement(i))
    }

    /// `eta^k` for any integer `k`.
    pub fn eta_pow(&self, k: i64) -> FieldElement {
        let m = (self.order - 1) as i64;
        FieldElement(self.exp[k.rem_euclid(m) as usize])
    }

    /// Discrete logarithm to base `eta`.
    pub fn log(&self, x: FieldElement) -> Option<u64> {
        match self.log[x.0 as usize] {
            NO_LOG => None,
            l => Some(u64::from(l)),
        }
    }

    // ---- arithmetic -----------------------------------------------------------

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.digitwise(x, y, |a, b, p| (a + b) % p)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.digitwise(x, y, |a, b, p| (a + p - b) % p)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        self.sub(FieldElement::ZERO, x)
    }

    fn digitwise(&self, x: FieldElement, y: FieldElement, f: impl Fn(u32, u32, u32) -> u32) -> FieldElement {
        let p = self.p;
        let (mut a, mut b) = (x.0, y.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += f(a % p, b % p, p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        FieldElement(out)
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement::ZERO;
        }
        let m = self.order - 1;
        let k = (u64::from(self.log[x.0 as usize]) + u64::from(self.log[y.0 as usize])) % m;
        FieldElement(self.exp[k as usize])
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        let l = self.log(x).ok_or(FieldError::DivisionByZero)?;
        let m = self.order - 1;
        Ok(FieldElement(self.exp[((m - l) % m) as usize]))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^k` by square-and-multiply; for nonzero `x` the exponent is first
    /// reduced modulo `Q - 1`. `0^0 = 1`.
    pub fn pow(&self, x: FieldElement, k: u64) -> FieldElement {
        if x.is_zero() {
            return if k == 0 { FieldElement::ONE } else { FieldElement::ZERO };
        }
        let mut k = k % (self.order - 1);
        let mut acc = FieldElement::ONE;
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Table-free product through the modulus, for cross-checking the tables.
    pub fn mul_reference(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let prod = poly::mul_mod(&self.coeffs(x), &self.coeffs(y), &self.modulus, self.p);
        FieldElement(pack(&prod, self.p))
    }

    /// `x^{p^i}`.
    pub fn frobenius(&self, x: FieldElement, i: u32) -> FieldElement {
        let Some(l) = self.log(x) else { return x };
        let m = u128::from(self.order - 1);
        let k = u128::from(l) * crate::numtheory::pow_mod(u64::from(self.p), u64::from(i), m as u64) as u128 % m;
        FieldElement(self.exp[k as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64, FieldError> {
        let l = self.log(x).ok_or(FieldError::ZeroInput)?;
        let m = self.order - 1;
        Ok(m / gcd(l, m))
    }

    pub fn is_primitive(&self, x: FieldElement) -> bool {
        self.log(x).is_some_and(|l| gcd(l, self.order - 1) == 1)
    }

    /// Order check through the prime factorisation of `Q - 1`, using the
    /// table-free polynomial route.
    pub fn is_primitive_reference(&self, x: FieldElement) -> bool {
        poly::has_full_order(&self.coeffs(x), &self.modulus, self.p)
    }

    // ---- traces and subfields -------------------------------------------------

    /// Sum of the `count` conjugates `x^{p^{step·i}}`, `0 ≤ i < count`.
    fn trace_by_definition(&self, x: FieldElement, count: u32, step: u32) -> FieldElement {
        (0..count).fold(FieldElement::ZERO, |acc, i| self.add(acc, self.frobenius(x, step * i)))
    }

    /// Whether `x` lies in F_q (equivalently `x^q = x`).
    pub fn in_subfield(&self, x: FieldElement, which: Subfield) -> bool {
        let steps = match which {
            Subfield::Q => self.e,
            Subfield::P => 1,
        };
        self.frobenius(x, steps) == x
    }

    pub fn trace(&self, x: FieldElement, map: TraceMap) -> Result<FieldElement, FieldError> {
        match map {
            TraceMap::ToQ => Ok(self.trace_by_definition(x, self.r, self.e)),
            TraceMap::ToP => Ok(self.trace_by_definition(x, self.e * self.r, 1)),
            TraceMap::QToP => {
                if !self.in_subfield(x, Subfield::Q) {
                    return Err(FieldError::NotInSubfield);
                }
                Ok(self.trace_by_definition(x, self.e, 1))
            }
        }
    }

    /// Tr_{q^r/q}(x) from the precomputed table.
    pub fn trace_to_q(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.trace_q[x.0 as usize])
    }

    /// `x^{(Q-1)/2} = 1`.
    pub fn is_square(&self, x: FieldElement) -> Result<bool, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInput);
        }
        Ok(self.pow(x, (self.order - 1) / 2) == FieldElement::ONE)
    }

    /// Elements of F_q (or F_p), zero first, then ascending packed value.
    pub fn subfield_elements(&self, which: Subfield) -> Vec<FieldElement> {
        match which {
            Subfield::P => (0..self.p).map(FieldElement).collect(),
            Subfield::Q => {
                let step = (self.order - 1) / (self.q - 1);
                let mut out: Vec<FieldElement> = std::iter::once(FieldElement::ZERO)
                    .chain((0..self.q - 1).map(|k| FieldElement(self.exp[(k * step) as usize])))
                    .collect();
                out.sort_unstable();
                out
            }
        }
    }
}

fn check_modulus(m: &[u32], p: u32, degree: usize) -> Result<(), FieldError> {
    let text = poly::format_coeffs(m);
    if m.len() != degree + 1 {
        return Err(FieldError::InvalidModulus(format!(
            "{text} has degree {}, expected {degree}",
            m.len().saturating_sub(1)
        )));
    }
    if m.iter().any(|&c| c >= p) {
        return Err(FieldError::InvalidModulus(format!("{text} has a coefficient ≥ {p}")));
    }
    if m[degree] != 1 {
        return Err(FieldError::InvalidModulus(format!("{text} is not monic")));
    }
    if !poly::is_irreducible(m, p) {
        return Err(FieldError::ReducibleModulus(text));
    }
    Ok(())
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn unpack(mut x: u32, p: u32, degree: usize) -> Vec<u32> {
    (0..degree)
        .map(|_| {
            let c = x % p;
            x /= p;
            c
        })
        .collect()
}
