use std::process::{Command, Output};

use serde_json::Value;

fn bsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsym"))
        .args(args)
        .env_remove("BSYM_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn enumerate_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b2.json");
    let out = bsym(&[
        "enumerate",
        "--p",
        "3",
        "--e",
        "1",
        "--r",
        "4",
        "--N",
        "2",
        "--b",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["polynomial"], "1 + 40T^34 + 40T^38");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["b"], 2);
    assert_eq!(v["counts"]["38"], 40);
    assert_eq!(v["closed_form"]["mu"], 3);
    assert_eq!(v["agreement"]["pass"], true);
    assert_eq!(v["params"]["modulus"], "2,0,0,2,1");
}

#[test]
fn enumerate_examples() {
    let out = bsym(&["enumerate", "--p", "3", "--r", "4", "--b", "1"]);
    assert_eq!(json(&out)["polynomial"], "1 + 40T^24 + 40T^30");
    let out = bsym(&["enumerate", "--p", "3", "--r", "2", "--b", "2"]);
    assert_eq!(json(&out)["polynomial"], "1 + 8T^4");
    let out = bsym(&[
        "enumerate",
        "--p",
        "3",
        "--r",
        "4",
        "--b-range",
        "1:3",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("b,weight,count\n1,0,1\n1,24,40\n"));
    assert_eq!(text.lines().count(), 1 + 3 * 3);
}

#[test]
fn enumerate_modes_agree() {
    let full = bsym(&[
        "enumerate",
        "--p",
        "5",
        "--r",
        "2",
        "--N",
        "4",
        "--b-range",
        "1:5",
        "--mode",
        "full",
    ]);
    let coset = bsym(&[
        "enumerate",
        "--p",
        "5",
        "--r",
        "2",
        "--N",
        "4",
        "--b-range",
        "1:5",
        "--mode",
        "coset",
    ]);
    let (f, c) = (json(&full), json(&coset));
    for i in 0..5 {
        assert_eq!(f[i]["counts"], c[i]["counts"]);
    }
    assert_eq!(c[0]["mode"], "by_coset");
}

#[test]
fn mu_examples() {
    let out = bsym(&["mu", "--p", "3", "--e", "2", "--r", "4", "--N", "2", "--b", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mu"], 50);
    let out = bsym(&["mu", "--p", "5", "--e", "2", "--r", "4", "--N", "2", "--b", "3"]);
    assert_eq!(json(&out)["mu"], 338);
    let out = bsym(&[
        "mu", "--p", "3", "--e", "1", "--r", "2", "--N", "2", "--b", "2", "--scan",
    ]);
    let v = json(&out);
    assert_eq!(v["primitive_total"], 4);
    assert_eq!(v["distribution"]["2"], 4);
}

#[test]
fn mu_scan_sample_records_seed() {
    let args = [
        "mu",
        "--p",
        "3",
        "--r",
        "4",
        "--b",
        "2",
        "--scan",
        "--samples",
        "10",
        "--seed",
        "11",
    ];
    let v = json(&bsym(&args));
    assert_eq!(v["seed"], 11);
    assert_eq!(v["scanned"], 10);
}

#[test]
fn table22_rows() {
    let out = bsym(&["table22"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("p,q,r,N,b,mu,"));
    let rows: Vec<Vec<String>> = lines
        .map(|l| {
            csv::ReaderBuilder::new()
                .has_headers(false)
                .from_reader(l.as_bytes())
                .records()
                .next()
                .unwrap()
                .unwrap()
                .iter()
                .map(String::from)
                .collect()
        })
        .collect();
    assert_eq!(rows.len(), 21);
    let find = |key: [&str; 5]| rows.iter().find(|r| r[..5] == key).map(|r| r[5].clone()).unwrap();
    assert_eq!(find(["3", "3", "4", "2", "4"]), "20");
    assert_eq!(find(["3", "9", "6", "2", "6"]), "33215");
    assert_eq!(find(["5", "5", "4", "2", "2"]), "4");
}

#[test]
fn verify_exhaustive() {
    for p in ["3", "5"] {
        let out = bsym(&["verify", "--p", p, "--e", "1", "--r", "4", "--N", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["pass"], true);
        assert_eq!(v["coverage"], "exhaustive");
        assert_eq!(v["checks"].as_array().unwrap().len(), 10);
        assert!(v.get("timings_ms").is_none());
    }
}

#[test]
fn deterministic_output() {
    let args = [
        "verify",
        "--p",
        "3",
        "--e",
        "2",
        "--r",
        "4",
        "--samples",
        "20",
        "--seed",
        "5",
        "--exhaustive-threshold",
        "100",
    ];
    let a = bsym(&args);
    let b = bsym(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["coverage"], "sampled");
    assert_eq!(v["seed"], 5);
    let e1 = bsym(&[
        "enumerate",
        "--p",
        "5",
        "--r",
        "4",
        "--b-range",
        "1:4",
        "--threads",
        "2",
    ]);
    let e2 = bsym(&[
        "enumerate",
        "--p",
        "5",
        "--r",
        "4",
        "--b-range",
        "1:4",
        "--threads",
        "1",
    ]);
    assert_eq!(e1.stdout, e2.stdout);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["enumerate", "--p", "2", "--r", "4", "--b", "2"],
        vec!["enumerate", "--p", "9", "--r", "4", "--b", "2"],
        vec!["enumerate", "--p", "3", "--r", "3", "--b", "2"],
        vec!["enumerate", "--p", "3", "--r", "4", "--N", "4", "--b", "2"],
        vec!["enumerate", "--p", "3", "--r", "4", "--b", "40"],
        vec!["enumerate", "--p", "3", "--r", "4"],
        vec!["mu", "--p", "3", "--r", "4", "--b", "5"],
        vec!["mu", "--p", "3", "--r", "4", "--b", "1"],
        vec!["mds", "--p", "3", "--r", "4", "--b", "1"],
        vec!["enumerate", "--p", "3", "--r", "2", "--b", "1", "--modulus", "2,0,1"],
        vec!["verify", "--p", "3", "--r", "4", "--samples", "0"],
        vec!["bogus"],
    ] {
        let out = bsym(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn user_modulus_is_recorded() {
    // x^2 + x + 2 is primitive over F_3
    let out = bsym(&["enumerate", "--p", "3", "--r", "2", "--b", "2", "--modulus", "2,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["provenance"]["modulus_source"], "user");
    assert_eq!(v["params"]["modulus"], "2,1,1");

    // x^2 + 1 is irreducible but x has order 4, so η moves to the first primitive element
    let v = json(&bsym(&[
        "enumerate",
        "--p",
        "3",
        "--r",
        "2",
        "--b",
        "2",
        "--modulus",
        "1,0,1",
    ]));
    assert_eq!(v["params"]["eta"], "1,1");
    assert_eq!(v["polynomial"], "1 + 8T^4");
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bsym"))
        .args(["mds", "--p", "3", "--r", "2", "--format", "text"])
        .env("BSYM_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("mds_p3_e1_r2_N2.txt")).unwrap();
    assert!(text.contains("MDS"), "{text}");
}
