//! The irreducible cyclic code `C = { c(a) : a ∈ F_{q^r} }` with
//! `c(a)_j = Tr(a·η^{jN})`, its b-symbol weights and weight enumerators.

use std::collections::BTreeMap;
use std::io::Write;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, Tower, TowerProvenance};
use crate::numtheory::gcd;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("N = {n_div} does not divide q^r - 1 = {group_order}")]
    NotDivisor { n_div: u64, group_order: u64 },
    #[error("gcd((q^r - 1)/(q - 1), N) = {gcd}, expected 2")]
    GcdNotTwo { gcd: u64 },
    #[error("code length n = {length} is below 3")]
    LengthTooShort { length: u64 },
    #[error("b = {b} outside the admissible range [{min}, {max}]")]
    BOutOfRange { b: usize, min: usize, max: usize },
    #[error("vectors of length {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("class-mode enumeration not established for this field: {0}")]
    ModeNotEstablished(String),
    #[error("full and by-class enumerators disagree at r = {r}, N = {n_div}, b = {b}")]
    ModeDisagreement { r: u32, n_div: u64, b: usize },
}

/// Validated code parameters.
#[derive(Clone, Debug)]
pub struct CodeParams {
    tower: Arc<Tower>,
    n_div: u64,
    length: usize,
    eta_n: FieldElement,
    /// `Tr(η^k) == 0` for `0 ≤ k < Q - 1`.
    zero_trace_at_power: Arc<Vec<bool>>,
}

/// Parameter block embedded in every serialized report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub p: u32,
    pub e: u32,
    pub r: u32,
    #[serde(rename = "N")]
    pub n_div: u64,
    pub n: usize,
    pub q: u64,
    pub modulus: String,
    pub eta: String,
}

impl CodeParams {
    /// Check `N | q^r - 1`, `n = (q^r-1)/N ≥ 3` and `gcd((q^r-1)/(q-1), N) = 2`,
    /// in that order.
    pub fn new(tower: Arc<Tower>, n_div: u64) -> Result<Self, CodeError> {
        let m = tower.group_order();
        if n_div == 0 || !m.is_multiple_of(n_div) {
            return Err(CodeError::NotDivisor { n_div, group_order: m });
        }
        let length = m / n_div;
        if length < 3 {
            return Err(CodeError::LengthTooShort { length });
        }
        let g = gcd(m / (tower.q() - 1), n_div);
        if g != 2 {
            return Err(CodeError::GcdNotTwo { gcd: g });
        }
        let zero_trace_at_power = tower.powers_of_eta().map(|x| tower.trace_to_q(x).is_zero()).collect();
        Ok(Self {
            eta_n: tower.eta_pow(n_div as i64),
            tower,
            n_div,
            length: length as usize,
            zero_trace_at_power: Arc::new(zero_trace_at_power),
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<Tower> {
        &self.tower
    }

    /// `N`.
    pub fn n_div(&self) -> u64 {
        self.n_div
    }

    /// Code length `n = (q^r - 1)/N`.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn eta_n(&self) -> FieldElement {
        self.eta_n
    }

    /// Range of b covered by the weight theorems, `[2, n - 1]`.
    pub fn b_range(&self) -> RangeInclusive<usize> {
        2..=self.length - 1
    }

    pub fn provenance(&self) -> TowerProvenance {
        self.tower.provenance()
    }

    pub fn record(&self) -> ParamsRecord {
        let prov = self.tower.provenance();
        ParamsRecord {
            p: prov.p,
            e: prov.e,
            r: prov.r,
            n_div: self.n_div,
            n: self.length,
            q: prov.q,
            modulus: prov.modulus,
            eta: prov.eta,
        }
    }

    pub(crate) fn check_b(&self, b: usize, min: usize, max: usize) -> Result<(), CodeError> {
        if b < min || b > max {
            return Err(CodeError::BOutOfRange { b, min, max });
        }
        Ok(())
    }

    /// Whether entry `j` of `c(η^k)` is zero.
    fn entry_is_zero(&self, log_a: u64, j: usize) -> bool {
        let m = self.tower.group_order();
        let k = (log_a + j as u64 * self.n_div) % m;
        self.zero_trace_at_power[k as usize]
    }

    /// `w_b(c(a))` without materialising the codeword.
    pub fn codeword_b_weight(&self, a: FieldElement, b: usize) -> usize {
        match self.tower.log(a) {
            None => 0,
            Some(la) => self.length - zero_windows(self.length, b, |j| self.entry_is_zero(la, j)),
        }
    }
}

pub fn validate_params(tower: Arc<Tower>, n_div: u64) -> Result<CodeParams, CodeError> {
    CodeParams::new(tower, n_div)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub entries: Vec<FieldElement>,
    pub source: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCodeword {
    pub entries: Vec<FieldElement>,
    pub source: FieldElement,
}

fn trace_word(params: &CodeParams, a: FieldElement, len: usize) -> Vec<FieldElement> {
    let t = params.tower();
    let mut cur = a;
    (0..len)
        .map(|_| {
            let v = t.trace_to_q(cur);
            cur = t.mul(cur, params.eta_n);
            v
        })
        .collect()
}

/// `c(a) = (Tr(a η^{0·N}), …, Tr(a η^{(n-1)N}))`.
pub fn codeword(params: &CodeParams, a: FieldElement) -> Codeword {
    Codeword {
        entries: trace_word(params, a, params.length),
        source: a,
    }
}

/// The length-`(q^r - 1)` word `ĉ(a)`, the N-fold repetition of `c(a)`.
pub fn extended_codeword(params: &CodeParams, a: FieldElement) -> ExtendedCodeword {
    ExtendedCodeword {
        entries: trace_word(params, a, params.tower.group_order() as usize),
        source: a,
    }
}

/// The image of a word under π_b: its `n` cyclic windows of length `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSymbolImage {
    pub b: usize,
    pub windows: Vec<Vec<FieldElement>>,
}

impl BSymbolImage {
    /// Number of windows that are not all zero.
    pub fn hamming_weight(&self) -> usize {
        self.windows.iter().filter(|w| w.iter().any(|x| !x.is_zero())).count()
    }
}

fn check_window(n: usize, b: usize) -> Result<(), CodeError> {
    if b < 1 || b + 1 > n {
        return Err(CodeError::BOutOfRange {
            b,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    Ok(())
}

pub fn pi_b(x: &[FieldElement], b: usize) -> Result<BSymbolImage, CodeError> {
    let n = x.len();
    check_window(n, b)?;
    let windows = (0..n).map(|i| (0..b).map(|k| x[(i + k) % n]).collect()).collect();
    Ok(BSymbolImage { b, windows })
}

/// Number of all-zero cyclic windows of length `b` in a length-`n` word,
/// from the lengths of its cyclic zero runs.
pub(crate) fn zero_windows(n: usize, b: usize, is_zero: impl Fn(usize) -> bool) -> usize {
    let Some(start) = (0..n).find(|&i| !is_zero(i)) else {
        return n;
    };
    let mut total = 0;
    let mut run: usize = 0;
    for step in 1..=n {
        if is_zero((start + step) % n) {
            run += 1;
        } else {
            total += (run + 1).saturating_sub(b);
            run = 0;
        }
    }
    total
}

/// `w_b(x)`: the Hamming weight of π_b(x).
pub fn b_weight(x: &[FieldElement], b: usize) -> Result<usize, CodeError> {
    check_window(x.len(), b)?;
    Ok(x.len() - zero_windows(x.len(), b, |i| x[i].is_zero()))
}

/// `d_b(x, y) = w_b(x - y)`. A window of `x - y` vanishes exactly where the
/// windows of `x` and `y` agree, so no field subtraction is needed.
pub fn b_distance(x: &[FieldElement], y: &[FieldElement], b: usize) -> Result<usize, CodeError> {
    if x.len() != y.len() {
        return Err(CodeError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    check_window(x.len(), b)?;
    Ok(x.len() - zero_windows(x.len(), b, |i| x[i] == y[i]))
}

/// Exact b-symbol weight distribution `weight → number of codewords`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub b: usize,
    #[serde(with = "string_keys")]
    pub counts: BTreeMap<usize, u64>,
    pub total: u64,
}

mod string_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, u64>, s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<String, u64>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, u64>, D::Error> {
        let raw = BTreeMap::<String, u64>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse().map(|k| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl WeightEnumerator {
    pub fn new(b: usize) -> Self {
        Self {
            b,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn add(&mut self, weight: usize, count: u64) {
        if count > 0 {
            *self.counts.entry(weight).or_insert(0) += count;
            self.total += count;
        }
    }

    /// Pointwise sum; enumerators over disjoint parts of the code merge to the whole.
    pub fn merge(mut self, other: &WeightEnumerator) -> Self {
        for (&w, &c) in &other.counts {
            self.add(w, c);
        }
        self
    }

    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    /// Minimum weight of a nonzero codeword.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }

    pub fn nonzero_weights(&self) -> Vec<usize> {
        self.counts.keys().copied().filter(|&w| w > 0).collect()
    }

    /// `1 + 40T^34 + 40T^38` style rendering.
    pub fn polynomial(&self) -> String {
        self.counts
            .iter()
            .map(|(&w, &c)| match w {
                0 => c.to_string(),
                _ if c == 1 => format!("T^{w}"),
                _ => format!("{c}T^{w}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["weight", "count"])?;
        for (weight, count) in &self.counts {
            w.write_record([weight.to_string(), count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Evidence that full and by-class enumeration agree for a field
/// characteristic and base field size, which unlocks [`EnumeratorMode::ByClass`].
#[derive(Clone, Debug)]
pub struct ClassAgreement {
    p: u32,
    e: u32,
    checked: Vec<(u32, u64, usize)>,
}

impl ClassAgreement {
    /// Compare full and by-class enumerators of `params` for every
    /// `b ∈ [1, n - 1]` up to `max_b`.
    pub fn establish(params: &CodeParams, max_b: usize) -> Result<Self, CodeError> {
        let t = params.tower();
        let top = max_b.min(params.length - 1);
        let mut checked = Vec::new();
        for b in 1..=top {
            let full = enumerator(params, b, EnumeratorMode::Full)?;
            let by_class = class_enumerator(params, b);
            if full != by_class {
                return Err(CodeError::ModeDisagreement {
                    r: t.r(),
                    n_div: params.n_div,
                    b,
                });
            }
            checked.push((t.r(), params.n_div, b));
        }
        Ok(Self {
            p: t.p(),
            e: t.e(),
            checked,
        })
    }

    /// `(r, N, b)` triples that were compared.
    pub fn checked(&self) -> &[(u32, u64, usize)] {
        &self.checked
    }
}

#[derive(Clone, Copy, Debug)]
pub enum EnumeratorMode<'a> {
    /// Every `a ∈ F_{q^r}`.
    Full,
    /// One representative per coset of `H = ⟨η^N⟩`, each counted `n` times.
    /// Exact: `c(a·η^N)` is a cyclic shift of `c(a)`.
    ByCoset,
    /// One square and one non-square, each counted `(q^r - 1)/2` times.
    ByClass(&'a ClassAgreement),
}

impl EnumeratorMode<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            EnumeratorMode::Full => "full",
            EnumeratorMode::ByCoset => "by_coset",
            EnumeratorMode::ByClass(_) => "by_class",
        }
    }
}

fn class_enumerator(params: &CodeParams, b: usize) -> WeightEnumerator {
    let t = params.tower();
    let half = t.group_order() / 2;
    let mut e = WeightEnumerator::new(b);
    e.add(0, 1);
    e.add(params.codeword_b_weight(FieldElement::ONE, b), half);
    e.add(params.codeword_b_weight(t.eta(), b), half);
    e
}

/// The b-symbol weight enumerator of `C`.
pub fn enumerator(params: &CodeParams, b: usize, mode: EnumeratorMode<'_>) -> Result<WeightEnumerator, CodeError> {
    params.check_b(b, 1, params.length - 1)?;
    let t = params.tower();
    match mode {
        EnumeratorMode::Full => {
            let m = t.group_order();
            let nonzero = (0..m)
                .into_par_iter()
                .fold(
                    || WeightEnumerator::new(b),
                    |mut acc, k| {
                        acc.add(params.codeword_b_weight(t.eta_pow(k as i64), b), 1);
                        acc
                    },
                )
                .reduce(|| WeightEnumerator::new(b), |x, y| x.merge(&y));
            let mut e = WeightEnumerator::new(b);
            e.add(0, 1);
            Ok(e.merge(&nonzero))
        }
        EnumeratorMode::ByCoset => {
            let mut e = WeightEnumerator::new(b);
            e.add(0, 1);
            for k in 0..params.n_div {
                e.add(params.codeword_b_weight(t.eta_pow(k as i64), b), params.length as u64);
            }
            Ok(e)
        }
        EnumeratorMode::ByClass(agreement) => {
            if agreement.p != t.p() || agreement.e != t.e() {
                return Err(CodeError::ModeNotEstablished(format!(
                    "agreement covers p = {}, e = {}; code has p = {}, e = {}",
                    agreement.p,
                    agreement.e,
                    t.p(),
                    t.e()
                )));
            }
            Ok(class_enumerator(params, b))
        }
    }
}

/// Singleton-type bound check `|C| ≤ q^{n - d_b + b}` with equality for MDS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdsReport {
    pub b: usize,
    pub d_b: usize,
    /// `|C| = q^r`.
    pub m: u64,
    /// `n - d_b + b`.
    pub singleton_exponent: usize,
    /// `q^{n - d_b + b}`, decimal.
    pub singleton_rhs: String,
    pub is_mds: bool,
}

pub fn mds_check(params: &CodeParams, b: usize, mode: EnumeratorMode<'_>) -> Result<MdsReport, CodeError> {
    params.check_b(b, 2, params.length - 1)?;
    let e = enumerator(params, b, mode)?;
    let d_b = e
        .min_nonzero_weight()
        .expect("a code of dimension r ≥ 2 has nonzero words");
    let exponent = params.length - d_b + b;
    let q = params.tower().q();
    let rhs = BigUint::from(q).pow(exponent as u32);
    let m = params.tower().order();
    Ok(MdsReport {
        b,
        d_b,
        m,
        singleton_exponent: exponent,
        is_mds: rhs == BigUint::from(m),
        singleton_rhs: rhs.to_string(),
    })
}
