use std::io::Write;
use std::path::{Path, PathBuf};

use linrel::models::{jacobi_example31, Example31Report, JacobiParams, ModelDescription};
use linrel::perturbation::{run_suite, SuiteConfig};
use linrel::sweep::{sweep, write_long_csv, write_summary_csv, Coefficients, SweepConfig};
use linrel::{io, spectral, Relation64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

/// `true` when every check passed.
pub type Outcome = Result<bool, CliError>;

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.write_record(r).map_err(csv_error)?;
    }
    w.into_inner().map_err(|e| CliError::Usage(e.to_string()))
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Usage(format!("csv: {e}"))
}

fn nonempty(name: &str, v: Option<Vec<usize>>, default: &[usize]) -> Result<Vec<usize>, CliError> {
    let v = v.unwrap_or_else(|| default.to_vec());
    if v.is_empty() {
        return Err(CliError::Usage(format!("{name} must be nonempty")));
    }
    Ok(v)
}

pub fn verify(cfg: &RunConfig) -> Outcome {
    let suite = SuiteConfig {
        seed: cfg.seed,
        dims: nonempty("dims", cfg.dims.clone(), &[4, 8, 16])?,
        instances: cfg.instances,
        rank: cfg.rank.unwrap_or(1),
    };
    let verdicts = run_suite(&suite, &cfg.tolerance)?;
    let passed = verdicts.iter().filter(|v| v.passed).count();
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&verdicts),
        Format::Csv => csv_bytes(
            &["theorem_id", "seed", "n", "residual", "passed"],
            verdicts.iter().map(|v| {
                [
                    v.theorem_id.as_str().to_string(),
                    v.seed.map(|s| s.to_string()).unwrap_or_default(),
                    v.n.to_string(),
                    v.residual.to_string(),
                    v.passed.to_string(),
                ]
            }),
        )?,
    };
    emit(cfg.out.as_deref(), &bytes)?;
    eprintln!("verify: {passed}/{} verdicts passed", verdicts.len());
    Ok(passed == verdicts.len())
}

#[derive(Serialize)]
struct Example31Line {
    seed: Option<u64>,
    #[serde(flatten)]
    report: Example31Report,
    passed: bool,
}

pub fn example31(cfg: &RunConfig) -> Outcome {
    let instances: Vec<(Option<u64>, JacobiParams)> = match &cfg.jacobi {
        Some(p) => vec![(None, p.clone())],
        None => {
            let sizes = nonempty("sizes", cfg.sizes.clone(), &[8, 64, 256])?;
            let mut v = Vec::new();
            for &n in &sizes {
                match cfg.coefficients.clone().unwrap_or(Coefficients::Free) {
                    Coefficients::Free => v.push((None, JacobiParams::free(n))),
                    Coefficients::Random { bound } => {
                        for i in 0..cfg.instances as u64 {
                            let seed = cfg.seed.wrapping_add(i);
                            v.push((Some(seed), JacobiParams::random(seed, n, bound)?));
                        }
                    }
                }
            }
            v
        }
    };
    let tol = cfg.tolerance;
    let lines = instances
        .par_iter()
        .map(|(seed, p)| {
            let report = jacobi_example31::<f64>(p, &tol)?.report(&tol)?;
            let passed = report.passed(tol.residual_tol);
            Ok(Example31Line {
                seed: *seed,
                report,
                passed,
            })
        })
        .collect::<Result<Vec<_>, linrel::Error>>()?;
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&lines),
        Format::Csv => csv_bytes(
            &[
                "N",
                "seed",
                "a1",
                "residual",
                "naive_deviation",
                "domain_is_x1",
                "mul_part_is_e1",
                "passed",
            ],
            lines.iter().map(|l| {
                let r = &l.report;
                [
                    r.size.to_string(),
                    l.seed.map(|s| s.to_string()).unwrap_or_default(),
                    r.a1.to_string(),
                    r.residual.to_string(),
                    r.naive_deviation.to_string(),
                    r.domain_is_x1.to_string(),
                    r.mul_part_is_e1.to_string(),
                    l.passed.to_string(),
                ]
            }),
        )?,
    };
    emit(cfg.out.as_deref(), &bytes)?;
    let passed = lines.iter().filter(|l| l.passed).count();
    eprintln!("example31: {passed}/{} instances passed", lines.len());
    Ok(passed == lines.len())
}

pub fn sweep_cmd(cfg: &RunConfig) -> Outcome {
    let mut sc = SweepConfig::free(
        nonempty("sizes", cfg.sizes.clone(), &[200, 400, 800, 1000])?,
        cfg.seed,
        cfg.rank.unwrap_or(1),
    );
    if let Some(d) = cfg.delta {
        sc.delta = d;
    }
    if let Some(b) = cfg.bulk_interval {
        sc.bulk_interval = b;
    }
    if let Some(c) = &cfg.coefficients {
        sc.coefficients = c.clone();
    }
    let rows = sweep::<f64>(&sc)?;
    let ok = rows.iter().all(|r| r.within_budget(sc.rank_r));
    let format = cfg.format.unwrap_or(Format::Csv);
    match (&cfg.out, format) {
        (Some(dir), Format::Csv) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            let mut long = Vec::new();
            write_long_csv(&rows, &mut long).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(Some(&dir.join("sweep_long.csv")), &long)?;
            let mut summary = Vec::new();
            write_summary_csv(&rows, &mut summary).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(Some(&dir.join("sweep_summary.csv")), &summary)?;
        }
        (None, Format::Csv) => {
            let mut summary = Vec::new();
            write_summary_csv(&rows, &mut summary).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(None, &summary)?;
        }
        (out, Format::Json) => {
            let path: Option<PathBuf> = match out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| {
                        CliError::Usage(format!("cannot create {}: {e}", dir.display()))
                    })?;
                    Some(dir.join("sweep.json"))
                }
                None => None,
            };
            emit(path.as_deref(), &json_bytes(&rows))?;
        }
    }
    for r in &rows {
        eprintln!(
            "sweep: N={} ks_bulk={} outliers_pert={} within_budget={}",
            r.size,
            r.ks_bulk,
            r.outliers_pert,
            r.within_budget(sc.rank_r)
        );
    }
    Ok(ok)
}

#[derive(Serialize)]
struct SpectrumOut {
    n: usize,
    domain_dim: usize,
    mul_dim: usize,
    eigenvalues: Vec<spectral::EigenvalueEntry>,
}

/// Reads a relation file, or a model description (an object with `kind`).
pub fn load_relation(path: &Path, cfg: &RunConfig) -> Result<Relation64, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if value.get("kind").is_some() {
        let model: ModelDescription = serde_json::from_value(value)
            .map_err(|e| CliError::Usage(format!("{}: model description: {e}", path.display())))?;
        Ok(model.build(&cfg.tolerance)?)
    } else {
        Ok(io::relation_from_json(&text, &cfg.tolerance)?)
    }
}

pub fn spectrum(cfg: &RunConfig, file: &Path) -> Outcome {
    let t = load_relation(file, cfg)?;
    let report = spectral::spectrum(&t, &cfg.tolerance)?;
    let out = SpectrumOut {
        n: t.space_dim(),
        domain_dim: report.space.dim(),
        mul_dim: report.mul_dim,
        eigenvalues: report.entries(),
    };
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&out),
        Format::Csv => csv_bytes(
            &["re", "im", "multiplicity"],
            out.eigenvalues.iter().map(|e| {
                [
                    e.value[0].to_string(),
                    e.value[1].to_string(),
                    e.multiplicity.to_string(),
                ]
            }),
        )?,
    };
    emit(cfg.out.as_deref(), &bytes)?;
    Ok(true)
}
