//! Runs every check on one parameter set and collects the verdicts.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::code::{mds_check, CodeParams, EnumeratorMode, ParamsRecord};
use crate::field::{FieldElement, TowerProvenance};
use crate::pb::{independence_check, mu, mu_closed_r};
use crate::theorems::{
    gauss_counts, theorem31, theorem33, verify_lemma41, verify_lemma42, z_closed_form, z_count, Decomposition,
    QuadraticClass, W1Source,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Failures keep at most this many witnesses per check.
const WITNESS_LIMIT: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub params: Value,
    pub witnesses_on_failure: Vec<Value>,
    pub pass: bool,
}

impl Verdict {
    pub fn from_witnesses(check: &str, params: Value, witnesses: Vec<Value>) -> Self {
        Self {
            check: check.to_string(),
            params,
            pass: witnesses.is_empty(),
            witnesses_on_failure: witnesses,
        }
    }
}

/// A recorded result that is not asserted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub name: String,
    pub detail: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictBundle {
    pub schema_version: u32,
    pub params: ParamsRecord,
    pub provenance: TowerProvenance,
    pub coverage: Coverage,
    pub seed: Option<u64>,
    /// Number of nonzero `a` visited by the per-element checks.
    pub elements_checked: usize,
    pub checks: Vec<Verdict>,
    pub observations: Vec<Observation>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Visit every nonzero `a` when `q^r` is at most this.
    pub exhaustive_threshold: u64,
    pub samples: usize,
    pub seed: u64,
    /// Elements fed to the multiset comparison, which costs `(q-1)(q^r-1)/N` each.
    pub multiset_samples: usize,
    /// Use direct `w_1` evaluation in the decomposition check up to this `q^r`.
    pub direct_w1_threshold: u64,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            exhaustive_threshold: 10_000,
            samples: 200,
            seed: 0x5EED,
            multiset_samples: 4,
            direct_w1_threshold: 1_000,
            timings: false,
        }
    }
}

/// `count` distinct nonzero elements drawn with a seeded generator, in index order.
pub fn sample_nonzero(params: &CodeParams, count: usize, seed: u64) -> Vec<FieldElement> {
    let t = params.tower();
    let pool = (t.order() - 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, pool, count.min(pool)).into_vec();
    idx.sort_unstable();
    idx.into_iter()
        .map(|i| t.from_index(i as u32 + 1).expect("in range"))
        .collect()
}

fn witnesses<I: IntoIterator<Item = Value>>(it: I) -> Vec<Value> {
    it.into_iter().take(WITNESS_LIMIT).collect()
}

fn class_name(c: QuadraticClass) -> &'static str {
    match c {
        QuadraticClass::Square => "square",
        QuadraticClass::NonSquare => "non_square",
    }
}

struct Runner<'a> {
    params: &'a CodeParams,
    elements: Vec<FieldElement>,
    checks: Vec<Verdict>,
    timings: BTreeMap<String, u64>,
}

impl Runner<'_> {
    fn run(&mut self, name: &str, f: impl FnOnce(&CodeParams, &[FieldElement]) -> (Value, Vec<Value>)) {
        let start = Instant::now();
        let (params, wit) = f(self.params, &self.elements);
        self.timings
            .insert(name.to_string(), start.elapsed().as_millis() as u64);
        self.checks.push(Verdict::from_witnesses(name, params, wit));
    }
}

pub fn run_verify(params: &CodeParams, cfg: &VerifyConfig) -> VerdictBundle {
    let t = params.tower();
    let r = t.r() as usize;
    let n = params.length();
    let exhaustive = t.order() <= cfg.exhaustive_threshold;
    let elements: Vec<FieldElement> = if exhaustive {
        t.elements().skip(1).collect()
    } else {
        sample_nonzero(params, cfg.samples.max(1), cfg.seed)
    };
    let mut run = Runner {
        params,
        elements,
        checks: Vec::new(),
        timings: BTreeMap::new(),
    };

    run.run("independence", |pr, _| {
        let bad = (2..=r).filter(|&b| !independence_check(pr, b).unwrap_or(false));
        (json!({ "b_range": [2, r] }), witnesses(bad.map(|b| json!({ "b": b }))))
    });

    run.run("mu_at_r", |pr, _| {
        let got = mu(pr, r).map(|m| m.mu).ok();
        let want = mu_closed_r(pr);
        let wit = if got == Some(want) {
            vec![]
        } else {
            vec![json!({ "b": r, "computed": got, "closed_form": want })]
        };
        (json!({ "b": r }), wit)
    });

    run.run("zero_count", |pr, els| {
        let tower = pr.tower();
        let bad = els.iter().filter_map(|&a| {
            let cls = QuadraticClass::of(tower, a).ok()?;
            let z = z_count(pr, a);
            let closed = z_closed_form(pr, cls);
            let n_w = pr.n_div() * pr.codeword_b_weight(a, 1) as u64;
            let ok =
                closed.is_integer() && closed.to_integer() == z.z.into() && z.extended_weight(tower.order()) == n_w;
            (!ok).then(|| json!({ "a": a, "class": class_name(cls), "z": z.z, "closed_form": closed.to_string() }))
        });
        (json!({ "elements": els.len() }), witnesses(bad))
    });

    run.run("gauss_counts", |pr, _| {
        let reports = [QuadraticClass::Square, QuadraticClass::NonSquare].map(|c| gauss_counts(pr.tower(), c));
        let bad = reports
            .iter()
            .filter(|g| !g.pass)
            .map(|g| serde_json::to_value(g).expect("serializable"));
        (json!({ "classes": ["square", "non_square"] }), witnesses(bad))
    });

    run.run("product_kernel", |pr, _| {
        let rep = verify_lemma41(pr);
        let wit = if rep.pass {
            vec![]
        } else {
            vec![serde_json::to_value(&rep).expect("serializable")]
        };
        (json!({ "expected_kernel": rep.expected_kernel }), wit)
    });

    let multiset_samples = cfg.multiset_samples;
    run.run("product_multiset", |pr, els| {
        let chosen: Vec<FieldElement> = els.iter().copied().take(multiset_samples).collect();
        let bad = chosen.iter().filter_map(|&a| match verify_lemma42(pr, a) {
            Ok(m) if m.equal => None,
            Ok(m) => Some(serde_json::to_value(&m).expect("serializable")),
            Err(e) => Some(json!({ "a": a, "error": e.to_string() })),
        });
        (json!({ "elements": chosen.len() }), witnesses(bad))
    });

    let direct_w1 = t.order() <= cfg.direct_w1_threshold;
    run.run("decomposition", |pr, els| {
        let source = if direct_w1 {
            W1Source::Direct
        } else {
            W1Source::CosetCache
        };
        let mut bad = Vec::new();
        for b in 2..=r {
            match Decomposition::new(pr, b) {
                Ok(d) => bad.extend(els.iter().filter_map(|&a| match d.check(a, source) {
                    Ok(c) if c.holds => None,
                    Ok(c) => Some(serde_json::to_value(&c).expect("serializable")),
                    Err(e) => Some(json!({ "a": a, "b": b, "error": e.to_string() })),
                })),
                Err(e) => bad.push(json!({ "b": b, "error": e.to_string() })),
            }
            if bad.len() >= WITNESS_LIMIT {
                break;
            }
        }
        let w1 = if direct_w1 { "direct" } else { "coset_cache" };
        (
            json!({ "b_range": [2, r], "elements": els.len(), "w1_source": w1 }),
            witnesses(bad),
        )
    });

    run.run("closed_form_weight", |pr, els| {
        let mut bad = Vec::new();
        let mut mus = BTreeMap::new();
        for b in 2..r {
            let m = match mu(pr, b) {
                Ok(m) => m.mu,
                Err(e) => {
                    bad.push(json!({ "b": b, "error": e.to_string() }));
                    continue;
                }
            };
            mus.insert(b.to_string(), m);
            let mut cache: BTreeMap<&str, Result<u64, String>> = BTreeMap::new();
            for &a in els {
                let cls = QuadraticClass::of(pr.tower(), a).expect("nonzero");
                let closed = cache
                    .entry(class_name(cls))
                    .or_insert_with(|| {
                        theorem31(pr, b, cls, m)
                            .map(|w| w.as_integer.expect("integral"))
                            .map_err(|e| e.to_string())
                    })
                    .clone();
                let brute = pr.codeword_b_weight(a, b) as u64;
                if closed.as_ref() != Ok(&brute) {
                    bad.push(
                        json!({ "a": a, "b": b, "mu": m, "closed_form": format!("{closed:?}"), "brute_force": brute }),
                    );
                    if bad.len() >= WITNESS_LIMIT {
                        break;
                    }
                }
            }
        }
        (
            json!({ "b_range": [2, r.saturating_sub(1)], "mu": mus }),
            witnesses(bad),
        )
    });

    let top = (n - 1).min(r + 2);
    run.run("full_window_weight", |pr, els| {
        let mut bad = Vec::new();
        for b in r..=top {
            let want = theorem33(pr, b).expect("b in range") as u64;
            bad.extend(els.iter().filter_map(|&a| {
                let got = pr.codeword_b_weight(a, b) as u64;
                (got != want).then(|| json!({ "a": a, "b": b, "weight": got, "expected": want }))
            }));
        }
        (json!({ "b_range": [r, top] }), witnesses(bad))
    });

    run.run("mds_at_r", |pr, _| {
        let wit = match mds_check(pr, r, EnumeratorMode::ByCoset) {
            Ok(rep) if rep.is_mds => vec![],
            Ok(rep) => vec![serde_json::to_value(&rep).expect("serializable")],
            Err(e) => vec![json!({ "error": e.to_string() })],
        };
        (json!({ "b": r, "enumeration": "by_coset" }), wit)
    });

    let mut observations = Vec::new();
    if n - 1 > top {
        let b = n - 1;
        let mut weights: BTreeMap<String, u64> = BTreeMap::new();
        for &a in &run.elements {
            *weights.entry(params.codeword_b_weight(a, b).to_string()).or_default() += 1;
        }
        observations.push(Observation {
            name: "weight_at_n_minus_1".into(),
            detail: json!({ "b": b, "n": n, "weights": weights }),
        });
    }

    let pass = run.checks.iter().all(|c| c.pass);
    VerdictBundle {
        schema_version: SCHEMA_VERSION,
        params: params.record(),
        provenance: params.provenance(),
        coverage: if exhaustive {
            Coverage::Exhaustive
        } else {
            Coverage::Sampled
        },
        seed: (!exhaustive).then_some(cfg.seed),
        elements_checked: run.elements.len(),
        checks: run.checks,
        observations,
        pass,
        timings_ms: cfg.timings.then_some(run.timings),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::Tower;

    fn params(p: u32, e: u32, r: u32, n_div: u64) -> CodeParams {
        CodeParams::new(Arc::new(Tower::build(p, e, r, None).unwrap()), n_div).unwrap()
    }

    #[test]
    fn small_runs_pass() {
        for (p, e, r, nd) in [(3, 1, 2, 2), (3, 1, 4, 2), (5, 1, 2, 4), (3, 2, 2, 8)] {
            let bundle = run_verify(&params(p, e, r, nd), &VerifyConfig::default());
            assert!(bundle.pass, "({p},{e},{r},{nd}): {:#?}", bundle.checks);
            assert_eq!(bundle.coverage, Coverage::Exhaustive);
            assert_eq!(bundle.checks.len(), 10);
            assert!(bundle.timings_ms.is_none());
        }
    }

    #[test]
    fn sampled_run_records_seed() {
        let cfg = VerifyConfig {
            exhaustive_threshold: 10,
            samples: 12,
            seed: 3,
            ..VerifyConfig::default()
        };
        let b1 = run_verify(&params(3, 1, 4, 2), &cfg);
        assert!(b1.pass);
        assert_eq!(b1.coverage, Coverage::Sampled);
        assert_eq!(b1.seed, Some(3));
        assert_eq!(b1.elements_checked, 12);
        let b2 = run_verify(&params(3, 1, 4, 2), &cfg);
        assert_eq!(serde_json::to_string(&b1).unwrap(), serde_json::to_string(&b2).unwrap());
    }

    #[test]
    fn observation_at_n_minus_1() {
        let bundle = run_verify(&params(3, 1, 4, 2), &VerifyConfig::default());
        let obs = &bundle.observations[0];
        assert_eq!(obs.detail["b"], 39);
        assert_eq!(obs.detail["weights"]["40"], 80);
    }

    #[test]
    fn sampling_is_deterministic_and_nonzero() {
        let pr = params(3, 1, 4, 2);
        let a = sample_nonzero(&pr, 10, 9);
        assert_eq!(a, sample_nonzero(&pr, 10, 9));
        assert!(a.iter().all(|x| !x.is_zero()));
        assert_eq!(sample_nonzero(&pr, 500, 1).len(), 80);
    }
}
