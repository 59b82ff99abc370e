//! Scalar abstraction.
//!
//! Everything in the crate is generic over a real floating-point type `R`
//! (`f32` or `f64`); vectors and matrices carry `Complex<R>` entries.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::ToPrimitive;

/// Real scalar usable as the base field of the complex Hilbert space.
pub trait Real: RealField + Copy + ToPrimitive {
    /// Default relative singular-value cutoff.
    const RANK_REL_TOL: f64;
    /// Default subspace comparison cutoff, in radians.
    const ANGLE_TOL: f64;
    /// Default identity-check cutoff.
    const RESIDUAL_TOL: f64;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const RANK_REL_TOL: f64 = 1e-10;
    const ANGLE_TOL: f64 = 1e-8;
    const RESIDUAL_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const RANK_REL_TOL: f64 = 1e-5;
    const ANGLE_TOL: f64 = 1e-3;
    const RESIDUAL_TOL: f64 = 1e-4;
}

pub type C<R> = Complex<R>;
pub type CMat<R> = DMatrix<Complex<R>>;
pub type CVec<R> = DVector<Complex<R>>;

#[inline]
pub fn cplx<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::lit(re), R::lit(im))
}

#[inline]
pub fn real<R: Real>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}

/// Complex matrix with real entries given in row-major order.
pub fn real_matrix<R: Real>(rows: usize, cols: usize, row_major: &[f64]) -> CMat<R> {
    assert_eq!(rows * cols, row_major.len(), "entry count");
    CMat::from_fn(rows, cols, |i, j| cplx(row_major[i * cols + j], 0.0))
}

/// Column vector with real entries.
pub fn real_column<R: Real>(entries: &[f64]) -> CMat<R> {
    real_matrix(entries.len(), 1, entries)
}
