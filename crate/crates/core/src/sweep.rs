//! Truncation sweeps: eigenvalue counting functions of a Jacobi relation with
//! a one-dimensional multivalued part, before and after a finite-rank
//! Hermitian perturbation.
//!
//! At size `N` the space is `C^N`, `M = span{e_1}` and
//! `S = graph(J_0) ⊕ ({0} × M)` with `J_0` the Jacobi matrix compressed to
//! coordinates `2..N`. The perturbation `A` has range in `M^⊥`, so the
//! operator parts of `S` and `T = S + A` are `J_0` and `J_0 + A` on `M^⊥` and
//! both spectra can be computed on `M^⊥` directly. [`build_pair`] assembles
//! the full relations for cross-checks at small `N`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense;
use crate::error::{Error, Result};
use crate::models::{finite_rank_matrix, hermitian_block, JacobiParams, ModelSeed};
use crate::relation::LinearRelation;
use crate::scalar::{CMat, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

/// Jacobi coefficients used at each truncation size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Coefficients {
    /// `a_n = 1`, `b_n = 0`.
    Free,
    /// Seeded random coefficients bounded by `bound`, redrawn per size.
    Random { bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Strictly increasing truncation sizes.
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub rank_r: usize,
    pub delta: f64,
    pub bulk_interval: [f64; 2],
    #[serde(default = "free")]
    pub coefficients: Coefficients,
}

fn free() -> Coefficients {
    Coefficients::Free
}

impl SweepConfig {
    /// Free Jacobi sweep with bulk interval `[−2, 2]`.
    pub fn free(sizes: Vec<usize>, seed: u64, rank_r: usize) -> Self {
        Self {
            sizes,
            seed,
            rank_r,
            delta: 0.05,
            bulk_interval: [-2.0, 2.0],
            coefficients: Coefficients::Free,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidParams("sizes must be nonempty".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "sizes must be strictly increasing".into(),
            ));
        }
        let smallest = self.sizes[0];
        if smallest < 3 {
            return Err(Error::InvalidParams(format!(
                "size {smallest} is below the minimum 3"
            )));
        }
        if self.rank_r > smallest - 1 {
            return Err(Error::RankTooLarge {
                rank: self.rank_r,
                available: smallest - 1,
            });
        }
        let [lo, hi] = self.bulk_interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParams(
                "bulk_interval must satisfy lo < hi".into(),
            ));
        }
        if !(self.delta > 0.0 && self.delta < (hi - lo) / 4.0) {
            return Err(Error::InvalidParams(format!(
                "delta must lie in (0, {}), got {}",
                (hi - lo) / 4.0,
                self.delta
            )));
        }
        if let Coefficients::Random { bound } = self.coefficients {
            if !(bound.is_finite() && bound > 0.0) {
                return Err(Error::InvalidParams(
                    "coefficient bound must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn jacobi(&self, size: usize) -> Result<JacobiParams> {
        match self.coefficients {
            Coefficients::Free => Ok(JacobiParams::free(size)),
            Coefficients::Random { bound } => JacobiParams::random(self.seed, size, bound),
        }
    }

    fn model_seed(&self, size: usize) -> Result<ModelSeed> {
        ModelSeed::new(self.seed, size, 1, self.rank_r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub size: usize,
    pub eig_unpert: Vec<f64>,
    pub eig_pert: Vec<f64>,
    /// `sup |F_pert − F_unpert| / N` over the shrunken bulk interval.
    pub ks_bulk: f64,
    /// Perturbed eigenvalues outside the widened bulk interval.
    pub outliers_pert: usize,
}

impl SweepRow {
    /// Counting shift within `(r + 1)/N` and at most `r` outliers (from `N ≥ 50`).
    pub fn within_budget(&self, rank_r: usize) -> bool {
        let bulk_ok = self.ks_bulk <= (rank_r + 1) as f64 / self.size as f64;
        let outliers_ok = self.size < 50 || self.outliers_pert <= rank_r;
        bulk_ok && outliers_ok
    }
}

/// Both relations of a sweep at size `N`, plus the perturbation matrix.
pub struct SweepPair<R: Real> {
    pub s: LinearRelation<R>,
    pub a: LinearRelation<R>,
    pub t: LinearRelation<R>,
    pub perturbation: CMat<R>,
}

fn m_perp<R: Real>(size: usize) -> Subspace<R> {
    let idx: Vec<usize> = (1..size).collect();
    Subspace::coordinate(size, &idx).expect("indices in range")
}

/// `J` with row and column of `e_1` cleared, so that it acts as `J_0` on `M^⊥`.
fn compressed_jacobi<R: Real>(p: &JacobiParams) -> CMat<R> {
    let mut j = p.matrix::<R>();
    j.row_mut(0)
        .fill(num_complex::Complex::new(R::zero(), R::zero()));
    j.column_mut(0)
        .fill(num_complex::Complex::new(R::zero(), R::zero()));
    j
}

fn perturbation<R: Real>(cfg: &SweepConfig, size: usize) -> Result<CMat<R>> {
    finite_rank_matrix(&cfg.model_seed(size)?, &m_perp::<R>(size))
}

pub fn build_pair<R: Real>(
    cfg: &SweepConfig,
    size: usize,
    tol: &Tolerance<R>,
) -> Result<SweepPair<R>> {
    cfg.validate()?;
    let p = cfg.jacobi(size)?;
    let m = Subspace::coordinate(size, &[0])?;
    let s = hermitian_block(&m_perp(size), &compressed_jacobi(&p), &m)?;
    let perturbation = perturbation::<R>(cfg, size)?;
    let a = LinearRelation::operator(&perturbation)?;
    let t = s.sum(&a, tol)?;
    Ok(SweepPair {
        s,
        a,
        t,
        perturbation,
    })
}

/// Eigenvalues of `J_0` and `J_0 + A` on `M^⊥`, ascending.
pub fn structured_spectra<R: Real>(cfg: &SweepConfig, size: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    cfg.validate()?;
    let p = cfg.jacobi(size)?;
    let j0 = p
        .real_matrix::<R>()
        .view((1, 1), (size - 1, size - 1))
        .into_owned();
    let unpert = dense::symmetric_eigenvalues(&j0);
    let a = perturbation::<R>(cfg, size)?
        .view((1, 1), (size - 1, size - 1))
        .into_owned();
    let j0c = j0.map(|x| num_complex::Complex::new(x, R::zero()));
    let pert = dense::hermitian_eigenvalues(&(j0c + a));
    let f = |v: Vec<R>| v.into_iter().map(|x| x.as_f64()).collect();
    Ok((f(unpert), f(pert)))
}

/// `#{λ ≤ x}` for ascending `sorted`.
fn count_le(sorted: &[f64], x: f64) -> usize {
    sorted.partition_point(|&v| v <= x)
}

fn row(cfg: &SweepConfig, size: usize, eig_unpert: Vec<f64>, eig_pert: Vec<f64>) -> SweepRow {
    let [lo, hi] = cfg.bulk_interval;
    let (a, b) = (lo + cfg.delta, hi - cfg.delta);
    // Both counting functions are right-continuous steps, so the supremum
    // over [a, b] is attained at a or at an eigenvalue inside it.
    let probes = std::iter::once(a).chain(
        eig_unpert
            .iter()
            .chain(eig_pert.iter())
            .copied()
            .filter(|&x| x >= a && x <= b),
    );
    let shift = probes
        .map(|x| count_le(&eig_pert, x).abs_diff(count_le(&eig_unpert, x)))
        .max()
        .unwrap_or(0);
    let outliers_pert = eig_pert
        .iter()
        .filter(|&&x| x < lo - cfg.delta || x > hi + cfg.delta)
        .count();
    SweepRow {
        size,
        eig_unpert,
        eig_pert,
        ks_bulk: shift as f64 / size as f64,
        outliers_pert,
    }
}

/// One row per size, in the order of `cfg.sizes`.
pub fn sweep<R: Real>(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    cfg.sizes
        .par_iter()
        .map(|&size| {
            let (u, p) = structured_spectra::<R>(cfg, size)?;
            Ok(row(cfg, size, u, p))
        })
        .collect()
}

/// `2 cos(kπ/(d + 1))`, `k = 1..d`, ascending: the spectrum of the free
/// Jacobi matrix of size `d`.
pub fn free_jacobi_eigenvalues(d: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=d)
        .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (d + 1) as f64).cos())
        .collect();
    v.reverse();
    v
}

/// Header `N,k,eig_unpert,eig_pert`, one line per eigenvalue index `k ≥ 1`.
pub fn write_long_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "k", "eig_unpert", "eig_pert"])?;
    for r in rows {
        for (k, (u, p)) in r.eig_unpert.iter().zip(&r.eig_pert).enumerate() {
            w.write_record([
                r.size.to_string(),
                (k + 1).to_string(),
                u.to_string(),
                p.to_string(),
            ])?;
        }
    }
    w.flush()
}

/// Header `N,ks_bulk,outliers_pert`.
pub fn write_summary_csv<W: Write>(rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "ks_bulk", "outliers_pert"])?;
    for r in rows {
        w.write_record([
            r.size.to_string(),
            r.ks_bulk.to_string(),
            r.outliers_pert.to_string(),
        ])?;
    }
    w.flush()
}
