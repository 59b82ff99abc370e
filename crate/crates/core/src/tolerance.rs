use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Numeric cutoffs shared by every subspace and relation operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance<R> {
    /// Relative singular-value cutoff for numeric rank.
    pub rank_rel_tol: R,
    /// Largest principal angle (radians) still treated as "same subspace".
    pub angle_tol: R,
    /// Cutoff for relative identity residuals.
    pub residual_tol: R,
}

impl<R: Real> Tolerance<R> {
    pub fn new(rank_rel_tol: R, angle_tol: R, residual_tol: R) -> Result<Self> {
        let upper = R::lit(1e-2);
        for (name, v) in [
            ("rank_rel_tol", rank_rel_tol),
            ("angle_tol", angle_tol),
            ("residual_tol", residual_tol),
        ] {
            if !(v > R::zero() && v < upper) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie in (0, 1e-2), got {}",
                    v.as_f64()
                )));
            }
        }
        Ok(Self {
            rank_rel_tol,
            angle_tol,
            residual_tol,
        })
    }

    pub fn with_residual_tol(self, residual_tol: R) -> Result<Self> {
        Self::new(self.rank_rel_tol, self.angle_tol, residual_tol)
    }

    /// Singular values at or below this value count as zero.
    ///
    /// `scale` is the reference magnitude (largest singular value, or 1 for
    /// blocks of an orthonormal basis).
    pub fn rank_cutoff(&self, scale: R, rows: usize, cols: usize) -> R {
        let dim = R::lit(rows.max(cols).max(1) as f64);
        self.rank_rel_tol * scale * dim
    }
}

impl<R: Real> Default for Tolerance<R> {
    fn default() -> Self {
        Self {
            rank_rel_tol: R::lit(R::RANK_REL_TOL),
            angle_tol: R::lit(R::ANGLE_TOL),
            residual_tol: R::lit(R::RESIDUAL_TOL),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_values() {
        let t = Tolerance::<f64>::default();
        assert_eq!(t.rank_rel_tol, 1e-10);
        assert_eq!(t.angle_tol, 1e-8);
        assert_eq!(t.residual_tol, 1e-9);
        assert!(Tolerance::<f32>::default().angle_tol < 1e-2);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Tolerance::<f64>::new(0.0, 1e-8, 1e-9).is_err());
        assert!(Tolerance::<f64>::new(1e-10, 0.5, 1e-9).is_err());
        assert!(Tolerance::<f64>::new(1e-10, 1e-8, f64::NAN).is_err());
        assert!(Tolerance::<f64>::new(1e-10, 1e-8, 1e-30).is_ok());
    }
}
