//! The representative set P(b) and the square count μ(b).
//!
//! P(b) picks one element from every F_q^*-coset of the nonzero part of
//! `V = span_{F_q}(1, η^N, …, η^{(b-1)N})`, in row-echelon form: a leading
//! `η^{(j-1)N}` followed by arbitrary F_q multiples of the later basis
//! vectors. μ(b) counts the squares of F_{q^r}^* inside P(b).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::CodeParams;
use crate::field::{FieldElement, Subfield, Tower, TowerProvenance};
use crate::numtheory::{gcd, pow_mod};
use crate::poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbError {
    #[error("b = {b} outside the admissible range [{min}, {max}]")]
    BOutOfRange { b: usize, min: usize, max: usize },
    #[error("1, g, …, g^{} are linearly dependent over F_q for g = {generator}", .b - 1)]
    DependentSpan { b: usize, generator: String },
}

fn check_b(tower: &Tower, b: usize) -> Result<(), PbError> {
    let r = tower.r() as usize;
    if b < 2 || b > r {
        return Err(PbError::BOutOfRange { b, min: 2, max: r });
    }
    Ok(())
}

/// Rank over F_p of coordinate vectors (rows), by Gaussian elimination.
fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let p64 = u64::from(p);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(u64::from(rows[rank][col]), p64 - 2, p64);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&c| u64::from(c) * inv % p64).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let f = u64::from(row[col]);
            for (c, &pv) in row.iter_mut().zip(&pivot_row) {
                *c = ((u64::from(*c) + p64 * p64 - f * pv) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

/// Whether `1, g, …, g^{b-1}` are linearly independent over F_q.
///
/// Expands each F_q-combination over an F_p-basis `1, ω, …, ω^{e-1}` of F_q
/// and checks that the `e·b` products `ω^i g^j` have full F_p-rank.
pub fn powers_independent(tower: &Tower, g: FieldElement, b: usize) -> bool {
    let omega = tower.eta_pow(((tower.order() - 1) / (tower.q() - 1)) as i64);
    let mut rows = Vec::with_capacity(tower.e() as usize * b);
    let mut gj = FieldElement::ONE;
    for _ in 0..b {
        let mut v = gj;
        for _ in 0..tower.e() {
            rows.push(tower.coeffs(v));
            v = tower.mul(v, omega);
        }
        gj = tower.mul(gj, g);
    }
    rank_mod_p(rows, tower.p()) == tower.e() as usize * b
}

/// `{1, η^N, …, η^{(b-1)N}}` is F_q-linearly independent.
pub fn independence_check(params: &CodeParams, b: usize) -> Result<bool, PbError> {
    check_b(params.tower(), b)?;
    Ok(powers_independent(params.tower(), params.eta_n(), b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbSet {
    pub b: usize,
    /// The generator `g` of the span, `η^N` unless built for another primitive element.
    pub generator: FieldElement,
    pub elements: Vec<FieldElement>,
}

impl PbSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `(q^b - 1)/(q - 1)`.
    pub fn expected_len(q: u64, b: usize) -> u64 {
        (q.pow(b as u32) - 1) / (q - 1)
    }
}

/// P(b) for the span generated by `g` (`1, g, …, g^{b-1}`).
pub fn build_pb_with(tower: &Tower, g: FieldElement, b: usize) -> Result<PbSet, PbError> {
    check_b(tower, b)?;
    if !powers_independent(tower, g, b) {
        return Err(PbError::DependentSpan {
            b,
            generator: poly::format_coeffs(&tower.coeffs(g)),
        });
    }
    let basis: Vec<FieldElement> = (0..b).map(|j| tower.pow(g, j as u64)).collect();
    let fq = tower.subfield_elements(Subfield::Q);
    let mut elements = Vec::with_capacity(PbSet::expected_len(tower.q(), b) as usize);
    for lead in 0..b - 1 {
        let tail = &basis[lead + 1..];
        // odometer over F_q^{tail.len()}
        let mut digits = vec![0usize; tail.len()];
        loop {
            let x = digits
                .iter()
                .zip(tail)
                .fold(basis[lead], |acc, (&d, &v)| tower.add(acc, tower.mul(fq[d], v)));
            elements.push(x);
            let Some(pos) = digits.iter().position(|&d| d + 1 < fq.len()) else {
                break;
            };
            digits[pos] += 1;
            digits[..pos].iter_mut().for_each(|d| *d = 0);
        }
    }
    elements.push(basis[b - 1]);
    Ok(PbSet {
        b,
        generator: g,
        elements,
    })
}

pub fn build_pb(params: &CodeParams, b: usize) -> Result<PbSet, PbError> {
    build_pb_with(params.tower(), params.eta_n(), b)
}

/// `μ(b)` with the code's η and its diagnostics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuReport {
    pub b: usize,
    pub mu: u64,
    pub pb_size: u64,
    #[serde(rename = "N")]
    pub n_div: u64,
    pub eta_provenance: TowerProvenance,
    /// `(q^b - 1)/(2(q - 1))`.
    pub midpoint: String,
    /// `|μ(b) - (q^b - 1)/(2(q - 1))|`; logged, not bounded.
    pub deviation: String,
    pub square_flags: Vec<bool>,
}

fn square_flags(tower: &Tower, pb: &PbSet) -> Vec<bool> {
    pb.elements
        .iter()
        .map(|&x| tower.is_square(x).expect("P(b) excludes zero"))
        .collect()
}

pub fn mu(params: &CodeParams, b: usize) -> Result<MuReport, PbError> {
    let t = params.tower();
    let pb = build_pb(params, b)?;
    let flags = square_flags(t, &pb);
    let mu = flags.iter().filter(|&&f| f).count() as u64;
    let size = PbSet::expected_len(t.q(), b);
    let midpoint = BigRational::new(BigInt::from(size), BigInt::from(2));
    let deviation = (BigRational::from_integer(BigInt::from(mu)) - &midpoint).abs();
    Ok(MuReport {
        b,
        mu,
        pb_size: pb.len() as u64,
        n_div: params.n_div(),
        eta_provenance: t.provenance(),
        midpoint: midpoint.to_string(),
        deviation: deviation.to_string(),
        square_flags: flags,
    })
}

/// `μ(r) = (q^r - 1)/(2(q - 1))`.
pub fn mu_closed_r(params: &CodeParams) -> u64 {
    let t = params.tower();
    (t.order() - 1) / (2 * (t.q() - 1))
}

/// Which primitive elements a scan visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanBudget {
    Full,
    Sample { count: usize, seed: u64 },
}

/// Distribution of μ(b) over primitive elements `η'` with `N` and the modulus fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuScan {
    pub b: usize,
    #[serde(rename = "N")]
    pub n_div: u64,
    pub primitive_total: u64,
    pub scanned: u64,
    pub seed: Option<u64>,
    pub distribution: BTreeMap<u64, u64>,
    pub min: u64,
    pub max: u64,
    pub provenance: TowerProvenance,
}

impl MuScan {
    pub fn is_single_point(&self) -> bool {
        self.distribution.len() == 1
    }
}

/// Exponents `k` with `η^k` primitive.
fn primitive_exponents(tower: &Tower) -> Vec<u64> {
    let m = tower.group_order();
    (1..m).filter(|&k| gcd(k, m) == 1).collect()
}

pub fn mu_scan(params: &CodeParams, b: usize, budget: ScanBudget) -> Result<MuScan, PbError> {
    let t = params.tower();
    check_b(t, b)?;
    let all = primitive_exponents(t);
    let total = all.len() as u64;
    let (chosen, seed) = match budget {
        ScanBudget::Full => (all, None),
        ScanBudget::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = rand::seq::index::sample(&mut rng, all.len(), count.min(all.len())).into_vec();
            idx.sort_unstable();
            (idx.into_iter().map(|i| all[i]).collect(), Some(seed))
        }
    };
    let n_div = params.n_div() as i64;
    let counts: Vec<u64> = chosen
        .par_iter()
        .map(|&k| {
            let g = t.eta_pow(k as i64 * n_div);
            let pb = build_pb_with(t, g, b)?;
            Ok(square_flags(t, &pb).into_iter().filter(|&f| f).count() as u64)
        })
        .collect::<Result<_, PbError>>()?;
    let mut distribution = BTreeMap::new();
    for &c in &counts {
        *distribution.entry(c).or_insert(0) += 1;
    }
    Ok(MuScan {
        b,
        n_div: params.n_div(),
        primitive_total: total,
        scanned: counts.len() as u64,
        seed,
        min: counts.iter().copied().min().unwrap_or(0),
        max: counts.iter().copied().max().unwrap_or(0),
        distribution,
        provenance: t.provenance(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;
    use std::sync::Arc;

    use super::*;

    fn params(p: u32, e: u32, r: u32, n_div: u64) -> CodeParams {
        CodeParams::new(Arc::new(Tower::build(p, e, r, None).unwrap()), n_div).unwrap()
    }

    #[test]
    fn independence() {
        assert!(independence_check(&params(3, 1, 4, 2), 4).unwrap());
        assert!(independence_check(&params(3, 1, 2, 2), 2).unwrap());
        assert!(independence_check(&params(3, 2, 4, 2), 4).unwrap());
        assert!(matches!(
            independence_check(&params(3, 1, 4, 2), 5),
            Err(PbError::BOutOfRange { b: 5, .. })
        ));
        assert!(matches!(
            independence_check(&params(3, 1, 4, 2), 1),
            Err(PbError::BOutOfRange { .. })
        ));
        // an element of F_q spans only a line
        let pr = params(3, 1, 4, 2);
        assert!(!powers_independent(pr.tower(), pr.tower().constant(2), 2));
    }

    #[test]
    fn p2_shape() {
        let pr = params(3, 1, 4, 2);
        let t = pr.tower();
        let pb = build_pb(&pr, 2).unwrap();
        let g = pr.eta_n();
        let mut want: Vec<FieldElement> = t
            .subfield_elements(Subfield::Q)
            .into_iter()
            .map(|x| t.add(FieldElement::ONE, t.mul(x, g)))
            .collect();
        want.push(g);
        assert_eq!(pb.elements, want);
        assert_eq!(pb.len(), 4);
    }

    /// Independent oracle: split V \ {0} into F_q^* orbits by brute force.
    fn coset_count_of_span(pr: &CodeParams, b: usize) -> usize {
        let t = pr.tower();
        let fq = t.subfield_elements(Subfield::Q);
        let mut span = vec![FieldElement::ZERO];
        for j in 0..b {
            let v = t.pow(pr.eta_n(), j as u64);
            span = span
                .iter()
                .flat_map(|&s| fq.iter().map(move |&c| (s, c)))
                .map(|(s, c)| t.add(s, t.mul(c, v)))
                .collect();
        }
        let mut seen = std::collections::HashSet::new();
        let mut orbits = 0;
        for &x in span.iter().filter(|x| !x.is_zero()) {
            if seen.insert(x) {
                orbits += 1;
                for &c in &fq[1..] {
                    seen.insert(t.mul(c, x));
                }
            }
        }
        orbits
    }

    #[test]
    fn sizes_and_coset_uniqueness() {
        for (p, e, r, nd) in [(3, 1, 2, 2), (3, 1, 4, 2), (5, 1, 4, 2), (3, 2, 2, 2), (5, 1, 2, 4)] {
            let pr = params(p, e, r, nd);
            let t = pr.tower();
            for b in 2..=r as usize {
                let pb = build_pb(&pr, b).unwrap();
                assert_eq!(pb.len() as u64, PbSet::expected_len(t.q(), b));
                assert_eq!(pb.len(), coset_count_of_span(&pr, b));
                assert_eq!(*pb.elements.last().unwrap(), t.pow(pr.eta_n(), b as u64 - 1));
                // λ·x distinct over λ ∈ F_q^*, x ∈ P(b)
                let mut hit = HashMap::new();
                for &x in &pb.elements {
                    for c in t.subfield_elements(Subfield::Q).into_iter().skip(1) {
                        assert!(hit.insert(t.mul(c, x), ()).is_none());
                    }
                }
                assert_eq!(hit.len() as u64, t.q().pow(b as u32) - 1);
                if b == r as usize {
                    assert_eq!(hit.len() as u64, t.group_order());
                }
            }
        }
        assert_eq!(build_pb(&params(3, 1, 4, 2), 3).unwrap().len(), 13);
    }

    #[test]
    fn mu_small_rows() {
        let pr = params(3, 1, 4, 2);
        assert_eq!(mu(&pr, 2).unwrap().mu, 3);
        assert_eq!(mu(&pr, 3).unwrap().mu, 8);
        let rep = mu(&pr, 4).unwrap();
        assert_eq!(rep.mu, 20);
        assert_eq!(rep.mu, mu_closed_r(&pr));
        assert_eq!(rep.square_flags.iter().filter(|&&f| f).count(), 20);
        assert_eq!(rep.midpoint, "20");
        assert_eq!(rep.deviation, "0");
        let rep = mu(&pr, 2).unwrap();
        assert_eq!(rep.midpoint, "2");
        assert_eq!(rep.deviation, "1");
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(mu_closed_r(&params(3, 1, 2, 2)), 2);
        assert_eq!(mu_closed_r(&params(5, 2, 4, 2)), 8138);
    }

    #[test]
    fn scan_q3() {
        let pr = params(3, 1, 2, 2);
        let scan = mu_scan(&pr, 2, ScanBudget::Full).unwrap();
        assert_eq!(scan.primitive_total, 4);
        assert_eq!(scan.scanned, 4);
        assert_eq!(scan.distribution, BTreeMap::from([(2, 4)]));

        let pr = params(3, 1, 4, 2);
        let scan = mu_scan(&pr, 4, ScanBudget::Full).unwrap();
        assert_eq!(scan.scanned, 32);
        assert_eq!(scan.distribution, BTreeMap::from([(20, 32)]));
        let scan = mu_scan(&pr, 2, ScanBudget::Full).unwrap();
        assert_eq!(scan.scanned, 32);
        assert_eq!(scan.distribution.values().sum::<u64>(), 32);

        let sampled = mu_scan(&pr, 2, ScanBudget::Sample { count: 5, seed: 7 }).unwrap();
        assert_eq!(sampled.scanned, 5);
        assert_eq!(
            sampled,
            mu_scan(&pr, 2, ScanBudget::Sample { count: 5, seed: 7 }).unwrap()
        );
    }

    #[test]
    fn rank_helper() {
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 0], vec![0, 1]], 3), 2);
    }
}
