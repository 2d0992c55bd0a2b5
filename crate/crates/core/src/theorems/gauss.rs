//! Quadratic character sums as exact fiber counts.
//!
//! For `y` running over the squares (or non-squares) of F_{q^r}^*, the sum of
//! `ζ_p^{Tr(y)}` is determined by the fiber sizes `N_t = |{y : Tr(y) = t}|`.
//! When `N_1 = … = N_{p-1}`, the sum equals `N_0 - N_1`, an integer.

use serde::{Deserialize, Serialize};

use super::{gauss_sign, QuadraticClass};
use crate::field::{Tower, TraceMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussReport {
    pub class: QuadraticClass,
    /// `N_t` for `t = 0, …, p-1`.
    pub fiber_counts: Vec<u64>,
    /// `N_1 = … = N_{p-1}`.
    pub constancy_ok: bool,
    /// `N_0 - N_1`.
    pub sum_value: i64,
    pub expected: i64,
    pub pass: bool,
}

/// `(∓ s q^{r/2} - 1)/2`, minus for squares.
pub fn expected_sum(tower: &Tower, class: QuadraticClass) -> i64 {
    let root = (tower.q() as i64).pow(tower.r() / 2);
    let s = gauss_sign(tower);
    match class {
        QuadraticClass::Square => (-s * root - 1) / 2,
        QuadraticClass::NonSquare => (s * root - 1) / 2,
    }
}

pub fn gauss_counts(tower: &Tower, class: QuadraticClass) -> GaussReport {
    let mut fiber_counts = vec![0u64; tower.p() as usize];
    for y in tower.elements().skip(1) {
        let want = class == QuadraticClass::Square;
        if tower.is_square(y).expect("nonzero") != want {
            continue;
        }
        let t = tower.trace(y, TraceMap::ToP).expect("ToP is total");
        fiber_counts[t.index() as usize] += 1;
    }
    let constancy_ok = fiber_counts[1..].iter().all(|&c| c == fiber_counts[1]);
    let sum_value = fiber_counts[0] as i64 - fiber_counts[1] as i64;
    let expected = expected_sum(tower, class);
    GaussReport {
        class,
        fiber_counts,
        constancy_ok,
        sum_value,
        expected,
        pass: constancy_ok && sum_value == expected,
    }
}
