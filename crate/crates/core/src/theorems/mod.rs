//! Closed-form b-symbol weights and executable checks of the identities
//! they rest on.
//!
//! Closed forms are evaluated over `BigRational`; an integrality failure is
//! an error, never rounded. Character sums are handled as exact fiber
//! counts of F_p-valued traces (see [`gauss`]).

pub mod decomposition;
pub mod gauss;
pub mod lemmas;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeParams, WeightEnumerator};
use crate::field::{FieldElement, Tower};
use crate::pb::PbError;

pub use decomposition::{verify_decomposition, Decomposition, DecompositionCheck, W1Source};
pub use gauss::{gauss_counts, GaussReport};
pub use lemmas::{verify_lemma41, verify_lemma42, KernelReport, MultisetCheck};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoremError {
    #[error("b = {b} outside the admissible range [{min}, {max}]")]
    BOutOfRange { b: usize, min: usize, max: usize },
    #[error("closed form evaluates to the non-integer {value}")]
    NonIntegralResult { value: String },
    #[error("closed form evaluates to {value}, outside [0, {n}]")]
    WeightOutOfRange { value: String, n: usize },
    #[error("the element must be nonzero")]
    ZeroInput,
    #[error(transparent)]
    Pb(#[from] PbError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticClass {
    Square,
    NonSquare,
}

impl QuadraticClass {
    pub fn of(tower: &Tower, a: FieldElement) -> Result<Self, TheoremError> {
        match tower.is_square(a) {
            Ok(true) => Ok(Self::Square),
            Ok(false) => Ok(Self::NonSquare),
            Err(_) => Err(TheoremError::ZeroInput),
        }
    }

    fn sigma(self) -> i64 {
        match self {
            Self::Square => 1,
            Self::NonSquare => -1,
        }
    }
}

/// Which of the four branches was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    P1Square,
    P1NonSquare,
    P3Square,
    P3NonSquare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormInputs {
    pub p: u32,
    pub e: u32,
    pub q: u64,
    pub r: u32,
    #[serde(rename = "N")]
    pub n_div: u64,
    pub b: usize,
    pub mu: u64,
    pub p_mod_4: u32,
    /// `(-1)^{er/2}`.
    pub er_half_sign: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormWeight {
    pub value: String,
    pub as_integer: Option<u64>,
    pub case: CaseTag,
    pub inputs: ClosedFormInputs,
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn pow_int(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// `(-1)^{er/2}`.
pub fn er_half_sign(tower: &Tower) -> i64 {
    if (tower.e() * tower.r() / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The sign attached to `q^{r/2}` in the quadratic Gauss sum: `+1` for
/// `p ≡ 1 mod 4`, `(-1)^{er/2}` for `p ≡ 3 mod 4`.
pub fn gauss_sign(tower: &Tower) -> i64 {
    if tower.p() % 4 == 1 {
        1
    } else {
        er_half_sign(tower)
    }
}

fn case_tag(tower: &Tower, cls: QuadraticClass) -> CaseTag {
    match (tower.p() % 4 == 1, cls) {
        (true, QuadraticClass::Square) => CaseTag::P1Square,
        (true, QuadraticClass::NonSquare) => CaseTag::P1NonSquare,
        (false, QuadraticClass::Square) => CaseTag::P3Square,
        (false, QuadraticClass::NonSquare) => CaseTag::P3NonSquare,
    }
}

/// Exact value of the closed-form weight for `2 ≤ b < r`, without the
/// integrality check:
///
/// `(q^b-1)/(N(q-1)q^{b-1}) · (q^r - (q^r + σ s (q-1) q^{r/2})/q) + σ·2μ s (q-1) q^{r/2}/(N q^b)`
///
/// with `σ = ±1` for squares / non-squares and `s` from [`gauss_sign`].
pub fn theorem31_value(
    params: &CodeParams,
    b: usize,
    cls: QuadraticClass,
    mu: u64,
) -> Result<ClosedFormWeight, TheoremError> {
    let value = rational_branch(params, b, cls, &int(mu))?;
    let t = params.tower();
    let as_integer = if value.is_integer() && !value.is_negative() {
        value.to_integer().to_u64()
    } else {
        None
    };
    Ok(ClosedFormWeight {
        value: value.to_string(),
        as_integer,
        case: case_tag(t, cls),
        inputs: ClosedFormInputs {
            p: t.p(),
            e: t.e(),
            q: t.q(),
            r: t.r(),
            n_div: params.n_div(),
            b,
            mu,
            p_mod_4: t.p() % 4,
            er_half_sign: er_half_sign(t),
        },
    })
}

/// The closed form evaluated at a rational μ.
pub fn rational_branch(
    params: &CodeParams,
    b: usize,
    cls: QuadraticClass,
    mu: &BigRational,
) -> Result<BigRational, TheoremError> {
    let t = params.tower();
    let r = t.r() as usize;
    if b < 2 || b >= r {
        return Err(TheoremError::BOutOfRange {
            b,
            min: 2,
            max: r.saturating_sub(1),
        });
    }
    let q = t.q();
    let n_div = int(params.n_div());
    let s = gauss_sign(t);
    let sigma = cls.sigma();
    let qr = int(pow_int(q, t.r()));
    let q_half = int(pow_int(q, t.r() / 2));
    let qm1 = int(q - 1);
    let lead = (int(pow_int(q, b as u32)) - BigRational::one()) / (&n_div * &qm1 * int(pow_int(q, b as u32 - 1)));
    let inner = &qr - (&qr + int(sigma * s) * &qm1 * &q_half) / int(q);
    let tail = int(2 * s) * mu * &qm1 * &q_half / (&n_div * int(pow_int(q, b as u32)));
    Ok(lead * inner + int(sigma) * tail)
}

/// `w_b(c(a))` for `2 ≤ b < r` and `a` of class `cls`, given `μ(b)` for the
/// same η as `params`.
pub fn theorem31(
    params: &CodeParams,
    b: usize,
    cls: QuadraticClass,
    mu: u64,
) -> Result<ClosedFormWeight, TheoremError> {
    let w = theorem31_value(params, b, cls, mu)?;
    let n = params.length();
    match w.as_integer {
        Some(v) if v as usize <= n => Ok(w),
        Some(_) => Err(TheoremError::WeightOutOfRange { value: w.value, n }),
        None if w.value.contains('/') => Err(TheoremError::NonIntegralResult { value: w.value }),
        None => Err(TheoremError::WeightOutOfRange { value: w.value, n }),
    }
}

/// `w_b(c(a)) = n` for `r ≤ b ≤ n - 1`, `a ≠ 0`.
pub fn theorem33(params: &CodeParams, b: usize) -> Result<usize, TheoremError> {
    let r = params.tower().r() as usize;
    let n = params.length();
    if b < r || b + 1 > n {
        return Err(TheoremError::BOutOfRange { b, min: r, max: n - 1 });
    }
    Ok(n)
}

/// Closed-form enumerator: `1 + ((q^r-1)/2)(T^{u_1} + T^{u_2})` for
/// `2 ≤ b < r`, and `1 + (q^r-1)T^n` for `r ≤ b ≤ n - 1`. `mu` is only read
/// in the first case.
pub fn corollary_enumerator(params: &CodeParams, b: usize, mu: u64) -> Result<WeightEnumerator, TheoremError> {
    let t = params.tower();
    let r = t.r() as usize;
    let n = params.length();
    if b < 2 || b + 1 > n {
        return Err(TheoremError::BOutOfRange { b, min: 2, max: n - 1 });
    }
    let mut e = WeightEnumerator::new(b);
    e.add(0, 1);
    if b >= r {
        e.add(theorem33(params, b)?, t.group_order());
        return Ok(e);
    }
    let half = t.group_order() / 2;
    for cls in [QuadraticClass::Square, QuadraticClass::NonSquare] {
        let w = theorem31(params, b, cls, mu)?;
        e.add(w.as_integer.expect("checked by theorem31") as usize, half);
    }
    Ok(e)
}

/// Closed-form Hamming weight enumerator, `w(c(a)) = (q^r - Z(a))/N`.
pub fn hamming_enumerator(params: &CodeParams) -> Result<WeightEnumerator, TheoremError> {
    let t = params.tower();
    let mut e = WeightEnumerator::new(1);
    e.add(0, 1);
    for cls in [QuadraticClass::Square, QuadraticClass::NonSquare] {
        let w = (int(t.order()) - z_closed_form(params, cls)) / int(params.n_div());
        if !w.is_integer() {
            return Err(TheoremError::NonIntegralResult { value: w.to_string() });
        }
        let w = w.to_integer().to_usize().expect("nonnegative");
        e.add(w, t.group_order() / 2);
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCount {
    pub a: FieldElement,
    /// `|{x ∈ F_{q^r} : Tr(a x^N) = 0}|`.
    pub z: u64,
}

impl ZCount {
    /// `w(ĉ(a)) = q^r - Z(a)`.
    pub fn extended_weight(&self, order: u64) -> u64 {
        order - self.z
    }
}

/// Direct count of the zeros of `x ↦ Tr(a x^N)` over all of F_{q^r}.
pub fn z_count(params: &CodeParams, a: FieldElement) -> ZCount {
    let t = params.tower();
    let z = (0..t.order() as u32)
        .into_par_iter()
        .filter(|&i| {
            let x = t.from_index(i).expect("in range");
            t.trace_to_q(t.mul(a, t.pow(x, params.n_div()))).is_zero()
        })
        .count() as u64;
    ZCount { a, z }
}

/// `Z(a)` for `a ≠ 0`: `(q^r ∓ s (q-1) q^{r/2})/q`, minus for squares.
pub fn z_closed_form(params: &CodeParams, cls: QuadraticClass) -> BigRational {
    let t = params.tower();
    let q = t.q();
    let shift = int(gauss_sign(t)) * int(q - 1) * int(pow_int(q, t.r() / 2));
    let qr = int(pow_int(q, t.r()));
    let num = match cls {
        QuadraticClass::Square => qr - shift,
        QuadraticClass::NonSquare => qr + shift,
    };
    num / int(q)
}

/// Sum of the two branch outputs, which does not depend on μ, and the
/// common value both branches take at `μ = (q^b - 1)/(2(q - 1))`.
pub fn branch_midpoint(params: &CodeParams, b: usize) -> Result<(BigRational, BigRational), TheoremError> {
    let sq = rational_branch(params, b, QuadraticClass::Square, &BigRational::zero())?;
    let ns = rational_branch(params, b, QuadraticClass::NonSquare, &BigRational::zero())?;
    let q = params.tower().q();
    let mid_mu = (int(pow_int(q, b as u32)) - BigRational::one()) / int(2 * (q - 1));
    let at_mid = rational_branch(params, b, QuadraticClass::Square, &mid_mu)?;
    Ok((sq + ns, at_mid))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::code::{enumerator, EnumeratorMode};
    use crate::pb::mu;

    fn params(p: u32, e: u32, r: u32, n_div: u64) -> CodeParams {
        CodeParams::new(Arc::new(Tower::build(p, e, r, None).unwrap()), n_div).unwrap()
    }

    #[test]
    fn example_weights_q3_r4() {
        let pr = params(3, 1, 4, 2);
        let sq = theorem31(&pr, 2, QuadraticClass::Square, 3).unwrap();
        let ns = theorem31(&pr, 2, QuadraticClass::NonSquare, 3).unwrap();
        assert_eq!((sq.as_integer, ns.as_integer), (Some(38), Some(34)));
        assert_eq!(sq.case, CaseTag::P3Square);
        assert_eq!(sq.inputs.er_half_sign, 1);
        // brute force on an explicit square
        let t = pr.tower();
        let a = t.eta_pow(2);
        assert_eq!(pr.codeword_b_weight(a, 2), 38);
        assert_eq!(pr.codeword_b_weight(t.eta(), 2), 34);
    }

    #[test]
    fn q5_r4_branches_integral_and_match() {
        let pr = params(5, 1, 4, 2);
        let t = pr.tower();
        for b in 2..4 {
            let m = mu(&pr, b).unwrap().mu;
            for k in (0..t.group_order()).step_by(37) {
                let a = t.eta_pow(k as i64);
                let cls = QuadraticClass::of(t, a).unwrap();
                let w = theorem31(&pr, b, cls, m).unwrap();
                let v = w.as_integer.unwrap();
                assert!(v as usize <= pr.length());
                assert_eq!(v as usize, pr.codeword_b_weight(a, b));
            }
        }
        assert_eq!(mu(&pr, 2).unwrap().mu, 4);
    }

    #[test]
    fn wrong_mu_is_rejected() {
        // q = 9, r = 6, b = 5: only μ ≡ 3731 (mod 81) clears the denominators
        let pr = params(3, 2, 6, 2);
        let bad = theorem31(&pr, 5, QuadraticClass::Square, 3728).unwrap_err();
        assert!(matches!(bad, TheoremError::NonIntegralResult { .. }));
        let good = theorem31(&pr, 5, QuadraticClass::Square, 3731).unwrap();
        assert_eq!(good.as_integer, Some(265_720));
    }

    #[test]
    fn closed_form_weight_range() {
        let pr = params(3, 1, 4, 2);
        assert!(matches!(
            theorem31(&pr, 4, QuadraticClass::Square, 20),
            Err(TheoremError::BOutOfRange { .. })
        ));
        assert!(matches!(
            theorem31(&pr, 1, QuadraticClass::Square, 0),
            Err(TheoremError::BOutOfRange { .. })
        ));
    }

    #[test]
    fn full_window_weight_values() {
        let pr = params(3, 1, 2, 2);
        assert_eq!(theorem33(&pr, 2).unwrap(), 4);
        for a in pr.tower().elements().skip(1) {
            assert_eq!(pr.codeword_b_weight(a, 2), 4);
        }
        let pr = params(3, 1, 4, 2);
        assert_eq!(theorem33(&pr, 4).unwrap(), 40);
        assert_eq!(theorem33(&pr, 5).unwrap(), 40);
        for a in pr.tower().elements().skip(1) {
            assert_eq!(pr.codeword_b_weight(a, 5), 40);
        }
        assert!(theorem33(&pr, 3).is_err());
        assert!(theorem33(&pr, 40).is_err());
    }

    #[test]
    fn corollary_examples() {
        let pr = params(3, 1, 4, 2);
        assert_eq!(
            corollary_enumerator(&pr, 2, 3).unwrap().polynomial(),
            "1 + 40T^34 + 40T^38"
        );
        assert_eq!(corollary_enumerator(&pr, 4, 0).unwrap().polynomial(), "1 + 80T^40");
        let pr = params(5, 1, 2, 2);
        let closed = corollary_enumerator(&pr, 2, 0).unwrap();
        assert_eq!(closed.polynomial(), "1 + 24T^12");
        assert_eq!(closed, enumerator(&pr, 2, EnumeratorMode::Full).unwrap());
    }

    #[test]
    fn hamming_closed_form() {
        let pr = params(3, 1, 4, 2);
        assert_eq!(hamming_enumerator(&pr).unwrap().polynomial(), "1 + 40T^24 + 40T^30");
        for (p, e, r, nd) in [(5, 1, 2, 4), (3, 2, 2, 8), (7, 1, 2, 6)] {
            let pr = params(p, e, r, nd);
            assert_eq!(
                hamming_enumerator(&pr).unwrap(),
                enumerator(&pr, 1, EnumeratorMode::Full).unwrap()
            );
        }
    }

    #[test]
    fn z_counts() {
        let pr = params(3, 1, 4, 2);
        let t = pr.tower();
        assert_eq!(z_count(&pr, FieldElement::ZERO).z, 81);
        let sq = z_count(&pr, FieldElement::ONE);
        assert_eq!(sq.z, 21);
        assert_eq!(z_count(&pr, t.eta()).z, 33);
        assert_eq!(z_closed_form(&pr, QuadraticClass::Square), int(21));
        assert_eq!(z_closed_form(&pr, QuadraticClass::NonSquare), int(33));
        // w(ĉ(a)) = q^r - Z(a) = N·w(c(a))
        assert_eq!(
            sq.extended_weight(81),
            2 * pr.codeword_b_weight(FieldElement::ONE, 1) as u64
        );
    }

    #[test]
    fn branches_meet_at_midpoint() {
        for (p, e, r, nd) in [(3, 1, 4, 2), (5, 1, 4, 2), (3, 2, 4, 2), (3, 1, 6, 2), (7, 1, 4, 2)] {
            let pr = params(p, e, r, nd);
            for b in 2..r as usize {
                let (sum, at_mid) = branch_midpoint(&pr, b).unwrap();
                assert_eq!(at_mid, &sum / int(2));
                let mu_star =
                    (int(pow_int(pr.tower().q(), b as u32)) - BigRational::one()) / int(2 * (pr.tower().q() - 1));
                let ns = rational_branch(&pr, b, QuadraticClass::NonSquare, &mu_star).unwrap();
                assert_eq!(ns, at_mid);
            }
        }
    }
}
