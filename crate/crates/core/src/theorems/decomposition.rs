//! `q^{b-1} · w_b(c(a)) = Σ_{θ ∈ P(b)} w_1(c(θa))`.
//!
//! The identity holds window by window: for `x` at a window start, the
//! F_q-linear map `u ↦ Tr(u x)` on `V = span(1, η^N, …, η^{(b-1)N})` has a
//! kernel of size `q^b` when the whole window is zero and `q^{b-1}`
//! otherwise. [`Decomposition::window_counts_hold`] checks that statement
//! directly.

use serde::{Deserialize, Serialize};

use super::TheoremError;
use crate::code::CodeParams;
use crate::field::FieldElement;
use crate::pb::{build_pb, PbSet};

/// How `w_1(c(θa))` is obtained on the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum W1Source {
    /// Evaluate every codeword.
    Direct,
    /// `w_1` is constant on cosets of `⟨η^N⟩`; look it up by `log mod N`.
    CosetCache,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub a: FieldElement,
    pub b: usize,
    /// `q^{b-1} · w_b(c(a))`.
    pub lhs: u64,
    /// `Σ_{θ ∈ P(b)} w_1(c(θa))`.
    pub rhs: u64,
    pub holds: bool,
}

pub struct Decomposition<'a> {
    params: &'a CodeParams,
    pb: PbSet,
    w1_by_coset: Vec<u64>,
}

impl<'a> Decomposition<'a> {
    pub fn new(params: &'a CodeParams, b: usize) -> Result<Self, TheoremError> {
        let pb = build_pb(params, b)?;
        let t = params.tower();
        let w1_by_coset = (0..params.n_div())
            .map(|k| params.codeword_b_weight(t.eta_pow(k as i64), 1) as u64)
            .collect();
        Ok(Self {
            params,
            pb,
            w1_by_coset,
        })
    }

    pub fn pb(&self) -> &PbSet {
        &self.pb
    }

    fn w1(&self, x: FieldElement, source: W1Source) -> u64 {
        match source {
            W1Source::Direct => self.params.codeword_b_weight(x, 1) as u64,
            W1Source::CosetCache => {
                let log = self.params.tower().log(x).expect("θa is nonzero");
                self.w1_by_coset[(log % self.params.n_div()) as usize]
            }
        }
    }

    pub fn check(&self, a: FieldElement, source: W1Source) -> Result<DecompositionCheck, TheoremError> {
        if a.is_zero() {
            return Err(TheoremError::ZeroInput);
        }
        let t = self.params.tower();
        let b = self.pb.b;
        let lhs = t.q().pow(b as u32 - 1) * self.params.codeword_b_weight(a, b) as u64;
        let rhs = self
            .pb
            .elements
            .iter()
            .map(|&theta| self.w1(t.mul(theta, a), source))
            .sum();
        Ok(DecompositionCheck {
            a,
            b,
            lhs,
            rhs,
            holds: lhs == rhs,
        })
    }

    /// For every window start `j`, `1 + (q-1)·#{θ ∈ P(b) : Tr(θ a η^{jN}) = 0}`
    /// is `q^b` if the window of `c(a)` at `j` is all zero and `q^{b-1}`
    /// otherwise.
    pub fn window_counts_hold(&self, a: FieldElement) -> Result<bool, TheoremError> {
        if a.is_zero() {
            return Err(TheoremError::ZeroInput);
        }
        let t = self.params.tower();
        let n = self.params.length();
        let b = self.pb.b;
        let q = t.q();
        let entries: Vec<bool> = (0..n)
            .map(|j| t.trace_to_q(t.mul(a, t.pow(self.params.eta_n(), j as u64))).is_zero())
            .collect();
        for j in 0..n {
            let x = t.mul(a, t.pow(self.params.eta_n(), j as u64));
            let hits = self
                .pb
                .elements
                .iter()
                .filter(|&&theta| t.trace_to_q(t.mul(theta, x)).is_zero())
                .count() as u64;
            let window_zero = (0..b).all(|k| entries[(j + k) % n]);
            let want = if window_zero {
                q.pow(b as u32)
            } else {
                q.pow(b as u32 - 1)
            };
            if 1 + (q - 1) * hits != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One-shot check with direct `w_1` evaluation.
pub fn verify_decomposition(
    params: &CodeParams,
    b: usize,
    a: FieldElement,
) -> Result<DecompositionCheck, TheoremError> {
    Decomposition::new(params, b)?.check(a, W1Source::Direct)
}
