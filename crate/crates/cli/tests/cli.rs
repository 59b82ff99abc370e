use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn linrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linrel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stdout)
        )
    })
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_defaults_pass_and_cover_every_identity() {
    let o = linrel(&["verify", "--dims", "4,6", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_stdout(&o);
    let rows = v.as_array().unwrap();
    let ids: std::collections::BTreeSet<_> = rows
        .iter()
        .map(|r| r["theorem_id"].as_str().unwrap())
        .collect();
    assert!(ids.len() >= 10, "{ids:?}");
    for r in rows {
        for key in [
            "theorem_id",
            "seed",
            "n",
            "residual",
            "ranks",
            "passed",
            "hypothesis_flags",
        ] {
            assert!(r.get(key).is_some(), "missing {key} in {r}");
        }
    }
}

#[test]
fn impossible_residual_tolerance_fails_with_one() {
    let o = linrel(&["verify", "--dims", "4", "--tol-residual", "1e-30"]);
    assert_eq!(code(&o), 1);
    let v = json_stdout(&o);
    assert!(v.as_array().unwrap().iter().any(|r| r["passed"] == false));
}

#[test]
fn empty_dims_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"dims": []}"#);
    assert_eq!(code(&linrel(&["verify", "--config", &cfg])), 2);
    assert_eq!(code(&linrel(&["verify", "--dims", ""])), 2);
}

#[test]
fn rank_too_large_is_a_usage_error() {
    assert_eq!(code(&linrel(&["verify", "--dims", "4", "--rank", "3"])), 2);
}

#[test]
fn example31_reports_the_naive_gap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"jacobi": {"N": 4, "a": [3.0, 1.0, 1.0], "b": [0.0, 0.0, 0.0, 0.0]}}"#,
    );
    let o = linrel(&["example31", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let v = json_stdout(&o);
    let r = &v[0];
    assert!(r["residual"].as_f64().unwrap() <= 1e-10);
    assert!((r["naive_deviation"].as_f64().unwrap() - 3.0).abs() < 1e-10);
}

#[test]
fn example31_free_sizes_pass() {
    let o = linrel(&["example31", "--sizes", "64"]);
    assert_eq!(code(&o), 0);
    let v = json_stdout(&o);
    assert!(v[0]["residual"].as_f64().unwrap() <= 1e-10);
    assert!((v[0]["naive_deviation"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn example31_rejects_vanishing_first_off_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"jacobi": {"N": 4, "a": [0.0, 1.0, 1.0], "b": [0.0, 0.0, 0.0, 0.0]}}"#,
    );
    assert_eq!(code(&linrel(&["example31", "--config", &cfg])), 2);
}

#[test]
fn sweep_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sw");
    let o = linrel(&[
        "sweep",
        "--sizes",
        "50,100",
        "--rank",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let long = std::fs::read_to_string(out.join("sweep_long.csv")).unwrap();
    assert!(long.starts_with("N,k,eig_unpert,eig_pert\n"));
    assert_eq!(long.lines().count(), 1 + 49 + 99);
    let summary = std::fs::read_to_string(out.join("sweep_summary.csv")).unwrap();
    assert!(summary.starts_with("N,ks_bulk,outliers_pert\n"));
    assert_eq!(summary.lines().count(), 3);
}

#[test]
fn sweep_without_perturbation_has_no_outliers() {
    let o = linrel(&["sweep", "--rank", "0", "--sizes", "10,20"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s, "N,ks_bulk,outliers_pert\n10,0,0\n20,0,0\n");
}

#[test]
fn sweep_rejects_wide_margin() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"delta": 5.0}"#);
    assert_eq!(code(&linrel(&["sweep", "--config", &cfg])), 2);
}

#[test]
fn spectrum_of_pure_multivalued_relation_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "r.json",
        r#"{"n": 2, "basis": [[[0,0],[0,0],[1,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]]]}"#,
    );
    let o = linrel(&["spectrum", &f]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_stdout(&o);
    assert_eq!(v["domain_dim"], 0);
    assert_eq!(v["mul_dim"], 2);
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 0);
}

#[test]
fn spectrum_of_identity() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let col = |i: usize| {
        let mut c = vec![[0.0, 0.0]; 6];
        c[i] = [h, 0.0];
        c[i + 3] = [h, 0.0];
        c
    };
    let body = serde_json::json!({"n": 3, "basis": [col(0), col(1), col(2)]}).to_string();
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "id.json", &body);
    let o = linrel(&["spectrum", &f]);
    assert_eq!(code(&o), 0);
    let v = json_stdout(&o);
    assert_eq!(v["mul_dim"], 0);
    let e = v["eigenvalues"].as_array().unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0]["multiplicity"], 3);
    assert!((e[0]["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn spectrum_of_jacobi_example_base() {
    // S is the identity on {x_1 = 0} with multivalued part span{e_1}
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "m.json",
        r#"{"kind": "example31_s", "seed": 0, "n": 5, "mul_dim": 1, "rank_r": 0}"#,
    );
    let o = linrel(&["spectrum", &f]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_stdout(&o);
    assert_eq!(v["domain_dim"], 4);
    assert_eq!(v["mul_dim"], 1);
    let e = v["eigenvalues"].as_array().unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0]["multiplicity"], 4);
    assert!((e[0]["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn spectrum_of_jacobi_example_sum_is_real() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "m.json",
        r#"{"kind": "example31", "seed": 0, "n": 5, "mul_dim": 1, "rank_r": 0,
            "jacobi": {"N": 5, "a": [1.0, 1.0, 1.0, 1.0], "b": [0.0, 0.0, 0.0, 0.0, 0.0]}}"#,
    );
    let o = linrel(&["spectrum", &f, "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = String::from_utf8(o.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("re,im,multiplicity"));
    let total: usize = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert!(f[1].parse::<f64>().unwrap().abs() < 1e-12);
            f[2].parse::<usize>().unwrap()
        })
        .sum();
    assert_eq!(total, 4);
}

#[test]
fn spectrum_of_non_hermitian_relation_fails_with_one() {
    // graph of the nilpotent shift e1 -> 0, e2 -> e1
    let body = r#"{"n": 2, "basis": [[[1,0],[0,0],[0,0],[0,0]], [[0,0],[0.7071067811865476,0],[0.7071067811865476,0],[0,0]]]}"#;
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "r.json", body);
    assert_eq!(code(&linrel(&["spectrum", &f])), 1);
}

#[test]
fn malformed_files_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("garbage.json", "not json"),
        ("short.json", r#"{"n": 2, "basis": [[[1,0]]]}"#),
        (
            "nonorth.json",
            r#"{"n": 1, "basis": [[[1,0],[0,0]], [[1,0],[0,0]]]}"#,
        ),
        ("extra.json", r#"{"n": 1, "basis": [], "oops": 1}"#),
        (
            "model.json",
            r#"{"kind": "nope", "seed": 0, "n": 3, "mul_dim": 0, "rank_r": 0}"#,
        ),
    ] {
        let f = write(dir.path(), name, body);
        let o = linrel(&["spectrum", &f]);
        assert_eq!(
            code(&o),
            2,
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(code(&linrel(&["spectrum", "/nonexistent/file.json"])), 2);
    let cfg = write(dir.path(), "bad_cfg.json", r#"{"sead": 1}"#);
    assert_eq!(code(&linrel(&["verify", "--config", &cfg])), 2);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"dims": [4], "seed": 9, "instances": 1, "format": "csv"}"#,
    );
    let o = linrel(&[
        "verify", "--config", &cfg, "--seed", "11", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json_stdout(&o);
    let rows = v.as_array().unwrap();
    assert!(rows.iter().all(|r| r["n"] == 4));
    assert!(rows
        .iter()
        .any(|r| r["seed"].as_u64().is_some_and(|s| s >= 11)));
    assert!(rows
        .iter()
        .all(|r| r["seed"].as_u64().is_none_or(|s| s != 9)));

    let o = linrel(&["verify", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .starts_with("theorem_id,seed,n,residual,passed\n"));
}

#[test]
fn threads_flag_is_validated() {
    assert_eq!(
        code(&linrel(&["verify", "--dims", "4", "--threads", "0"])),
        2
    );
    assert_eq!(
        code(&linrel(&["verify", "--dims", "4", "--threads", "2"])),
        0
    );
}
