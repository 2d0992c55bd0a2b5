use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use bsym_core::code::{enumerator, mds_check, CodeParams, EnumeratorMode, MdsReport, ParamsRecord, WeightEnumerator};
use bsym_core::field::{Tower, TowerProvenance};
use bsym_core::pb::{self, MuReport, MuScan, ScanBudget};
use bsym_core::poly::parse_coeffs;
use bsym_core::table::{reproduce_table, RowStatus, TableReport};
use bsym_core::theorems::{corollary_enumerator, hamming_enumerator};
use bsym_core::verify::{run_verify, Verdict, VerdictBundle, VerifyConfig, SCHEMA_VERSION};
use serde::Serialize;
use serde_json::json;

use crate::output::{to_csv, to_json, Format, Report};
use crate::{BSelect, CodeArgs, Mode};

/// Largest `q^r` enumerated over every element in `auto` mode.
const FULL_ENUMERATION_LIMIT: u64 = 1 << 16;

/// Bad parameters or arguments; exits with code 2.
#[derive(Debug)]
pub struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(e: impl fmt::Display) -> UsageError {
    UsageError(e.to_string())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<&'a ParamsRecord>,
    #[serde(flatten)]
    body: T,
}

fn envelope<'a, T: Serialize>(params: Option<&'a ParamsRecord>, body: T) -> Envelope<'a, T> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        params,
        body,
    }
}

/// A single object for one `b`, an array for a range.
fn json_items<T: Serialize>(items: &[T]) -> String {
    match items {
        [one] => to_json(one),
        many => to_json(&many),
    }
}

fn build_params(code: &CodeArgs) -> Result<CodeParams, UsageError> {
    let modulus = code
        .modulus
        .as_deref()
        .map(parse_coeffs)
        .transpose()
        .map_err(|e| UsageError(format!("--modulus: {e}")))?;
    let tower = Tower::build(code.p, code.e, code.r, modulus.as_deref()).map_err(usage)?;
    CodeParams::new(Arc::new(tower), code.n_div).map_err(usage)
}

fn stem(cmd: &str, code: &CodeArgs) -> String {
    format!("{cmd}_p{}_e{}_r{}_N{}", code.p, code.e, code.r, code.n_div)
}

fn required_b(b: &BSelect) -> Result<Vec<usize>, UsageError> {
    b.values()
        .ok_or_else(|| UsageError("one of --b or --b-range is required".into()))
}

fn resolve_mode(params: &CodeParams, mode: Mode) -> EnumeratorMode<'static> {
    match mode {
        Mode::Full => EnumeratorMode::Full,
        Mode::Coset => EnumeratorMode::ByCoset,
        Mode::Auto if params.tower().order() <= FULL_ENUMERATION_LIMIT => EnumeratorMode::Full,
        Mode::Auto => EnumeratorMode::ByCoset,
    }
}

#[derive(Serialize)]
struct ClosedForm {
    polynomial: String,
    #[serde(flatten)]
    enumerator: WeightEnumerator,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<u64>,
}

#[derive(Serialize)]
struct EnumerationReport<'a> {
    schema_version: u32,
    params: &'a ParamsRecord,
    provenance: &'a TowerProvenance,
    mode: &'static str,
    polynomial: String,
    #[serde(flatten)]
    enumerator: WeightEnumerator,
    closed_form: Option<ClosedForm>,
    agreement: Verdict,
}

fn closed_form_for(params: &CodeParams, b: usize) -> Result<ClosedForm, String> {
    let r = params.tower().r() as usize;
    let (enumerator, mu) = if b == 1 {
        (hamming_enumerator(params).map_err(|e| e.to_string())?, None)
    } else if b < r {
        let m = pb::mu(params, b).map_err(|e| e.to_string())?.mu;
        (corollary_enumerator(params, b, m).map_err(|e| e.to_string())?, Some(m))
    } else {
        (corollary_enumerator(params, b, 0).map_err(|e| e.to_string())?, None)
    };
    Ok(ClosedForm {
        polynomial: enumerator.polynomial(),
        enumerator,
        mu,
    })
}

pub fn enumerate(code: &CodeArgs, b: &BSelect, mode: Mode, format: Format) -> Result<Report, UsageError> {
    let params = build_params(code)?;
    let record = params.record();
    let provenance = params.provenance();
    let mode = resolve_mode(&params, mode);
    let mut reports = Vec::new();
    for b in required_b(b)? {
        let brute = enumerator(&params, b, mode).map_err(usage)?;
        let (closed_form, witnesses) = match closed_form_for(&params, b) {
            Ok(cf) if cf.enumerator == brute => (Some(cf), vec![]),
            Ok(cf) => {
                let w = json!({ "brute_force": brute.polynomial(), "closed_form": cf.polynomial });
                (Some(cf), vec![w])
            }
            Err(e) => (None, vec![json!({ "error": e })]),
        };
        let agreement = Verdict::from_witnesses("closed_form_agreement", json!({ "b": b }), witnesses);
        reports.push(EnumerationReport {
            schema_version: SCHEMA_VERSION,
            params: &record,
            provenance: &provenance,
            mode: mode.name(),
            polynomial: brute.polynomial(),
            enumerator: brute,
            closed_form,
            agreement,
        });
    }
    let pass = reports.iter().all(|r| r.agreement.pass);
    let body = match format {
        Format::Json => json_items(&reports),
        Format::Csv => to_csv(|w| {
            w.write_record(["b", "weight", "count"])?;
            for rep in &reports {
                for (weight, count) in &rep.enumerator.counts {
                    w.write_record([rep.enumerator.b.to_string(), weight.to_string(), count.to_string()])?;
                }
            }
            w.flush().map_err(Into::into)
        }),
        Format::Text => {
            let mut s = String::new();
            for rep in &reports {
                let status = if rep.agreement.pass {
                    "closed form agrees"
                } else {
                    "CLOSED FORM DISAGREES"
                };
                writeln!(s, "b = {}: {}  [{}]", rep.enumerator.b, rep.polynomial, status).unwrap();
            }
            s
        }
    };
    Ok(Report {
        stem: stem("enumerate", code),
        body,
        pass,
    })
}

pub fn mu(
    code: &CodeArgs,
    b: &BSelect,
    scan: bool,
    samples: Option<u64>,
    seed: u64,
    format: Format,
) -> Result<Report, UsageError> {
    let params = build_params(code)?;
    let record = params.record();
    let bs = required_b(b)?;
    let body = if scan {
        let budget = match samples {
            Some(count) => ScanBudget::Sample {
                count: count as usize,
                seed,
            },
            None => ScanBudget::Full,
        };
        let scans: Vec<MuScan> = bs
            .iter()
            .map(|&b| pb::mu_scan(&params, b, budget))
            .collect::<Result<_, _>>()
            .map_err(usage)?;
        render_scans(&record, &scans, format)
    } else {
        let reports: Vec<MuReport> = bs
            .iter()
            .map(|&b| pb::mu(&params, b))
            .collect::<Result<_, _>>()
            .map_err(usage)?;
        render_mu(&record, &reports, format)
    };
    Ok(Report {
        stem: stem(if scan { "mu_scan" } else { "mu" }, code),
        body,
        pass: true,
    })
}

fn render_mu(record: &ParamsRecord, reports: &[MuReport], format: Format) -> String {
    match format {
        Format::Json => json_items(&reports.iter().map(|r| envelope(Some(record), r)).collect::<Vec<_>>()),
        Format::Csv => to_csv(|w| {
            w.write_record(["b", "mu", "pb_size", "midpoint", "deviation"])?;
            for r in reports {
                w.write_record([
                    r.b.to_string(),
                    r.mu.to_string(),
                    r.pb_size.to_string(),
                    r.midpoint.clone(),
                    r.deviation.clone(),
                ])?;
            }
            w.flush().map_err(Into::into)
        }),
        Format::Text => reports
            .iter()
            .map(|r| {
                format!(
                    "b = {}: mu = {}  (|P(b)| = {}, midpoint {}, deviation {})\n",
                    r.b, r.mu, r.pb_size, r.midpoint, r.deviation
                )
            })
            .collect(),
    }
}

fn render_scans(record: &ParamsRecord, scans: &[MuScan], format: Format) -> String {
    match format {
        Format::Json => json_items(&scans.iter().map(|s| envelope(Some(record), s)).collect::<Vec<_>>()),
        Format::Csv => to_csv(|w| {
            w.write_record(["b", "mu", "count"])?;
            for s in scans {
                for (mu, count) in &s.distribution {
                    w.write_record([s.b.to_string(), mu.to_string(), count.to_string()])?;
                }
            }
            w.flush().map_err(Into::into)
        }),
        Format::Text => {
            let mut out = String::new();
            for s in scans {
                writeln!(
                    out,
                    "b = {}: {} of {} primitive elements, mu in [{}, {}]",
                    s.b, s.scanned, s.primitive_total, s.min, s.max
                )
                .unwrap();
                for (mu, count) in &s.distribution {
                    writeln!(out, "  mu = {mu}: {count}").unwrap();
                }
            }
            out
        }
    }
}

pub fn table22(format: Format) -> Result<Report, UsageError> {
    let report = reproduce_table().map_err(usage)?;
    let body = match format {
        Format::Json => to_json(&envelope(None, &report)),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("utf-8")
        }
        Format::Text => render_table_text(&report),
    };
    Ok(Report {
        stem: "table22".into(),
        body,
        pass: report.pass,
    })
}

fn render_table_text(report: &TableReport) -> String {
    let mut s = format!(
        "{:>3} {:>3} {:>2} {:>2} {:>2} {:>6} {:>9}  status\n",
        "p", "q", "r", "N", "b", "mu", "published"
    );
    for row in &report.rows {
        let status = match row.status {
            RowStatus::Match => "match",
            RowStatus::EtaDependence => "eta-dependence (closed form checked)",
            RowStatus::Mismatch => "MISMATCH",
            RowStatus::ClosedFormFailure => "CLOSED FORM FAILURE",
        };
        writeln!(
            s,
            "{:>3} {:>3} {:>2} {:>2} {:>2} {:>6} {:>9}  {}",
            row.p, row.q, row.r, row.n_div, row.b, row.mu, row.published, status
        )
        .unwrap();
    }
    s
}

pub fn verify(
    code: &CodeArgs,
    samples: u64,
    seed: u64,
    exhaustive_threshold: u64,
    timings: bool,
    format: Format,
) -> Result<Report, UsageError> {
    let params = build_params(code)?;
    let cfg = VerifyConfig {
        exhaustive_threshold,
        samples: samples as usize,
        seed,
        timings,
        ..VerifyConfig::default()
    };
    let bundle = run_verify(&params, &cfg);
    Ok(Report {
        stem: stem("verify", code),
        body: render_bundle(&bundle, format),
        pass: bundle.pass,
    })
}

fn render_bundle(bundle: &VerdictBundle, format: Format) -> String {
    match format {
        Format::Json => to_json(bundle),
        Format::Csv => to_csv(|w| {
            w.write_record(["check", "pass", "witnesses"])?;
            for c in &bundle.checks {
                w.write_record([
                    c.check.clone(),
                    c.pass.to_string(),
                    serde_json::to_string(&c.witnesses_on_failure).expect("json"),
                ])?;
            }
            w.flush().map_err(Into::into)
        }),
        Format::Text => {
            let mut s = String::new();
            let coverage = match bundle.seed {
                Some(seed) => format!("sampled, {} elements, seed {seed}", bundle.elements_checked),
                None => format!("exhaustive, {} elements", bundle.elements_checked),
            };
            writeln!(
                s,
                "p = {}, q = {}, r = {}, N = {}, n = {} ({coverage})",
                bundle.params.p, bundle.params.q, bundle.params.r, bundle.params.n_div, bundle.params.n
            )
            .unwrap();
            for c in &bundle.checks {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                let ms = bundle
                    .timings_ms
                    .as_ref()
                    .and_then(|t| t.get(&c.check))
                    .map(|ms| format!("  {ms} ms"))
                    .unwrap_or_default();
                writeln!(s, "[{tag}] {}{ms}", c.check).unwrap();
                for w in &c.witnesses_on_failure {
                    writeln!(s, "       {w}").unwrap();
                }
            }
            writeln!(s, "{}", if bundle.pass { "all checks pass" } else { "FAILED" }).unwrap();
            s
        }
    }
}

pub fn mds(code: &CodeArgs, b: &BSelect, mode: Mode, format: Format) -> Result<Report, UsageError> {
    let params = build_params(code)?;
    let record = params.record();
    let mode = resolve_mode(&params, mode);
    let bs = b.values().unwrap_or_else(|| vec![params.tower().r() as usize]);
    let reports: Vec<MdsReport> = bs
        .iter()
        .map(|&b| mds_check(&params, b, mode))
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    let body = match format {
        Format::Json => json_items(&reports.iter().map(|r| envelope(Some(&record), r)).collect::<Vec<_>>()),
        Format::Csv => to_csv(|w| {
            w.write_record(["b", "d_b", "m", "singleton_exponent", "singleton_rhs", "is_mds"])?;
            for r in &reports {
                w.write_record([
                    r.b.to_string(),
                    r.d_b.to_string(),
                    r.m.to_string(),
                    r.singleton_exponent.to_string(),
                    r.singleton_rhs.clone(),
                    r.is_mds.to_string(),
                ])?;
            }
            w.flush().map_err(Into::into)
        }),
        Format::Text => reports
            .iter()
            .map(|r| {
                format!(
                    "b = {}: d_b = {}, |C| = {}, q^(n - d_b + b) = {}  {}\n",
                    r.b,
                    r.d_b,
                    r.m,
                    r.singleton_rhs,
                    if r.is_mds { "MDS" } else { "not MDS" }
                )
            })
            .collect(),
    };
    Ok(Report {
        stem: stem("mds", code),
        body,
        pass: true,
    })
}
