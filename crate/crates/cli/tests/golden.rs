//! Reruns the CLI on the inputs in `docs/golden` and compares against the
//! stored outputs. Exact for discrete fields; tolerant for floats, whose
//! last bits depend on the platform's dense kernels.

use std::path::{Path, PathBuf};
use std::process::Command;

use linrel::io::{relation_from_json, relation_to_json, RelationFile};
use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/golden")
        .join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap()
}

fn run(args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_linrel"))
        .args(args)
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    o.stdout
}

fn path(name: &str) -> String {
    golden(name).to_string_lossy().into_owned()
}

fn close(a: &Value, b: &Value, tol: f64) -> bool {
    (a.as_f64().unwrap() - b.as_f64().unwrap()).abs() <= tol
}

#[test]
fn relation_files_round_trip_bit_for_bit() {
    let tol = linrel::Tolerance64::default();
    for name in ["relation_identity3.json", "relation_pure_multivalued2.json"] {
        let text = read(name);
        let rel = relation_from_json::<f64>(&text, &tol).unwrap();
        let again: RelationFile = serde_json::from_str(&relation_to_json(&rel)).unwrap();
        let orig: RelationFile = serde_json::from_str(&text).unwrap();
        assert_eq!(orig.n, again.n);
        let bits = |f: &RelationFile| -> Vec<u64> {
            f.basis
                .iter()
                .flatten()
                .flat_map(|z| [z[0].to_bits(), z[1].to_bits()])
                .collect()
        };
        assert_eq!(bits(&orig), bits(&again), "{name}");
    }
}

#[test]
fn verify_matches_golden_verdicts() {
    let out = run(&["verify", "--config", &path("verify_config.json")]);
    let got: Value = serde_json::from_slice(&out).unwrap();
    let want: Value = serde_json::from_str(&read("verify_verdicts.json")).unwrap();
    let (got, want) = (got.as_array().unwrap(), want.as_array().unwrap());
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        for key in [
            "theorem_id",
            "seed",
            "n",
            "ranks",
            "hypothesis_flags",
            "checks",
            "passed",
        ] {
            assert_eq!(g[key], w[key], "{key} in {g}");
        }
        assert!(g["residual"].as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn example31_matches_golden_report() {
    let out = run(&["example31", "--config", &path("example31_config.json")]);
    let got: Value = serde_json::from_slice(&out).unwrap();
    let want: Value = serde_json::from_str(&read("example31_report.json")).unwrap();
    let (got, want) = (got.as_array().unwrap(), want.as_array().unwrap());
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        for key in [
            "seed",
            "N",
            "a1",
            "domain_is_x1",
            "mul_part_is_e1",
            "passed",
        ] {
            assert_eq!(g[key], w[key], "{key}");
        }
        assert!(close(&g["naive_deviation"], &w["naive_deviation"], 1e-9));
        assert!(g["residual"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn sweep_matches_golden_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    run(&[
        "sweep",
        "--config",
        &path("sweep_config.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    let summary = std::fs::read_to_string(out.join("sweep_summary.csv")).unwrap();
    assert_eq!(summary, read("sweep/sweep_summary.csv"));

    let rows = |text: &str| -> Vec<Vec<f64>> {
        text.lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect()
    };
    let got = rows(&std::fs::read_to_string(out.join("sweep_long.csv")).unwrap());
    let want = rows(&read("sweep/sweep_long.csv"));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g[..2], w[..2]);
        assert!(
            (g[2] - w[2]).abs() <= 1e-10 && (g[3] - w[3]).abs() <= 1e-10,
            "{g:?} vs {w:?}"
        );
    }
}

#[test]
fn spectra_match_golden_outputs() {
    for (input, output) in [
        ("relation_identity3.json", "spectrum_identity3.json"),
        (
            "relation_pure_multivalued2.json",
            "spectrum_pure_multivalued2.json",
        ),
        ("model_example31_n6.json", "spectrum_example31_n6.json"),
        (
            "model_block_self_adjoint_n5.json",
            "spectrum_block_self_adjoint_n5.json",
        ),
    ] {
        let got: Value = serde_json::from_slice(&run(&["spectrum", &path(input)])).unwrap();
        let want: Value = serde_json::from_str(&read(output)).unwrap();
        for key in ["n", "domain_dim", "mul_dim"] {
            assert_eq!(got[key], want[key], "{input}: {key}");
        }
        let (g, w) = (
            got["eigenvalues"].as_array().unwrap(),
            want["eigenvalues"].as_array().unwrap(),
        );
        assert_eq!(g.len(), w.len(), "{input}");
        for (a, b) in g.iter().zip(w) {
            assert_eq!(a["multiplicity"], b["multiplicity"]);
            assert!(
                close(&a["value"][0], &b["value"][0], 1e-10),
                "{input}: {a} vs {b}"
            );
            assert!(
                close(&a["value"][1], &b["value"][1], 1e-10),
                "{input}: {a} vs {b}"
            );
        }
    }
}
