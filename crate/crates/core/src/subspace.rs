//! Linear subspaces of `C^m` held as orthonormal bases.
//!
//! Equality and containment are decided by principal angles, never by
//! comparing basis matrices. The zero subspace is an `m × 0` basis and is
//! accepted by every operation.

use num_complex::Complex;

use crate::dense::{self, all_finite};
use crate::error::{ensure_dim, Error, Result};
use crate::scalar::{CMat, Real};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<R: Real> {
    basis: CMat<R>,
}

/// Outcome of [`Subspace::compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// The receiver is a proper subspace of the argument.
    SubsetOf,
    /// The argument is a proper subspace of the receiver.
    SupersetOf,
    Incomparable,
}

impl<R: Real> Subspace<R> {
    /// Orthonormal basis for the span of the columns of `vectors`.
    ///
    /// Numeric rank is measured relative to the largest singular value.
    pub fn orthonormalize(vectors: &CMat<R>, tol: &Tolerance<R>) -> Result<Self> {
        if !all_finite(vectors) {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        Ok(Self::span_scaled(vectors, R::zero(), tol))
    }

    /// Span with the rank cutoff measured against `max(σ_max, scale)`.
    ///
    /// Used internally where the columns are combinations of orthonormal
    /// vectors, so that total cancellation is recognised as rank zero.
    pub(crate) fn span_scaled(vectors: &CMat<R>, scale: R, tol: &Tolerance<R>) -> Self {
        let (m, p) = vectors.shape();
        let dec = dense::svd(vectors);
        let smax = dec.largest();
        if smax == R::zero() {
            return Self::zero(m);
        }
        let reference = if scale > smax { scale } else { smax };
        let r = dec.rank_above(tol.rank_cutoff(reference, m, p));
        Self {
            basis: dec.u.columns(0, r).into_owned(),
        }
    }

    /// Wraps a basis already known to have orthonormal columns.
    pub(crate) fn from_orthonormal(basis: CMat<R>) -> Self {
        Self { basis }
    }

    /// Keeps `basis` verbatim after checking its columns are orthonormal to
    /// within `angle_tol`.
    pub fn from_orthonormal_checked(basis: CMat<R>, tol: &Tolerance<R>) -> Result<Self> {
        if !all_finite(&basis) {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis - CMat::<R>::identity(k, k);
        let defect = gram
            .iter()
            .map(|z| z.norm_sqr().sqrt())
            .fold(R::zero(), |a, b| a.max(b));
        if defect > tol.angle_tol {
            return Err(Error::InvalidInput(format!(
                "basis columns are not orthonormal (Gram defect {:e})",
                defect.as_f64()
            )));
        }
        Ok(Self { basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: CMat::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMat::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the given standard basis vectors (0-based indices).
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let mut basis = CMat::zeros(ambient_dim, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if i >= ambient_dim {
                return Err(Error::InvalidInput(format!(
                    "coordinate {i} outside C^{ambient_dim}"
                )));
            }
            if indices[..j].contains(&i) {
                return Err(Error::InvalidInput(format!("repeated coordinate {i}")));
            }
            basis[(i, j)] = Complex::new(R::one(), R::zero());
        }
        Ok(Self { basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat<R> {
        &self.basis
    }

    pub fn into_basis(self) -> CMat<R> {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Matrix of the orthogonal projection onto this subspace.
    pub fn projector(&self) -> CMat<R> {
        dense::mul(&self.basis, &self.basis.adjoint())
    }

    pub fn complement(&self) -> Self {
        Self {
            basis: dense::complement_of_orthonormal(&self.basis),
        }
    }

    /// `P_U v` for every column of `v`.
    pub fn project(&self, v: &CMat<R>) -> Result<CMat<R>> {
        ensure_dim(self.ambient_dim(), v.nrows())?;
        Ok(dense::mul(&self.basis, &dense::adjoint_mul(&self.basis, v)))
    }

    pub fn sum(&self, other: &Self, tol: &Tolerance<R>) -> Result<Self> {
        ensure_dim(self.ambient_dim(), other.ambient_dim())?;
        let joined = dense::hstack(self.ambient_dim(), &[&self.basis, &other.basis]);
        Ok(Self::span_scaled(&joined, R::one(), tol))
    }

    /// `U ∩ V`, computed as `(U^⊥ + V^⊥)^⊥`.
    pub fn intersect(&self, other: &Self, tol: &Tolerance<R>) -> Result<Self> {
        ensure_dim(self.ambient_dim(), other.ambient_dim())?;
        let perp = self.complement().sum(&other.complement(), tol)?;
        Ok(perp.complement())
    }

    pub fn intersect_and_sum(&self, other: &Self, tol: &Tolerance<R>) -> Result<(Self, Self)> {
        Ok((self.intersect(other, tol)?, self.sum(other, tol)?))
    }

    /// Sine of the largest principal angle between `self` and its projection
    /// onto `other`, i.e. `‖(I − P_other) U‖₂`.
    pub fn containment_gap(&self, other: &Self) -> Result<R> {
        ensure_dim(self.ambient_dim(), other.ambient_dim())?;
        if self.dim() == 0 {
            return Ok(R::zero());
        }
        let residual =
            &self.basis - dense::mul(&other.basis, &dense::adjoint_mul(&other.basis, &self.basis));
        Ok(dense::spectral_norm(&residual))
    }

    /// `self ⊆ other` at `angle_tol`.
    pub fn is_subspace_of(&self, other: &Self, tol: &Tolerance<R>) -> Result<bool> {
        if self.dim() > other.dim() {
            ensure_dim(self.ambient_dim(), other.ambient_dim())?;
            return Ok(false);
        }
        let gap = self.containment_gap(other)?;
        Ok(gap <= tol.angle_tol.sin())
    }

    pub fn compare(&self, other: &Self, tol: &Tolerance<R>) -> Result<Comparison> {
        let sub = self.is_subspace_of(other, tol)?;
        let sup = other.is_subspace_of(self, tol)?;
        Ok(match (sub, sup) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::SubsetOf,
            (false, true) => Comparison::SupersetOf,
            (false, false) => Comparison::Incomparable,
        })
    }

    pub fn equals(&self, other: &Self, tol: &Tolerance<R>) -> Result<bool> {
        Ok(self.compare(other, tol)? == Comparison::Equal)
    }

    /// Principal angles in ascending order (`min(dim U, dim V)` of them).
    pub fn principal_angles(&self, other: &Self) -> Result<Vec<R>> {
        ensure_dim(self.ambient_dim(), other.ambient_dim())?;
        let cross = dense::adjoint_mul(&self.basis, &other.basis);
        let mut angles: Vec<R> = dense::singular_values(&cross)
            .into_iter()
            .map(|c| c.min(R::one()).acos())
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        Ok(angles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    type S = Subspace<f64>;

    fn cols(m: usize, data: &[&[(f64, f64)]]) -> CMat<f64> {
        let mut out = CMat::zeros(m, data.len());
        for (j, col) in data.iter().enumerate() {
            for (i, &(re, im)) in col.iter().enumerate() {
                out[(i, j)] = cplx(re, im);
            }
        }
        out
    }

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn orthonormalize_collinear_columns() {
        let v = cols(2, &[&[(1.0, 0.0), (0.0, 0.0)], &[(2.0, 0.0), (0.0, 0.0)]]);
        let u = S::orthonormalize(&v, &tol()).unwrap();
        assert_eq!(u.dim(), 1);
        assert!(u.equals(&S::coordinate(2, &[0]).unwrap(), &tol()).unwrap());
    }

    #[test]
    fn orthonormalize_empty_and_full() {
        let u = S::orthonormalize(&CMat::zeros(3, 0), &tol()).unwrap();
        assert_eq!((u.ambient_dim(), u.dim()), (3, 0));
        let v = cols(2, &[&[(1.0, 0.0), (1.0, 0.0)], &[(1.0, 0.0), (-1.0, 0.0)]]);
        assert_eq!(S::orthonormalize(&v, &tol()).unwrap().dim(), 2);
    }

    #[test]
    fn orthonormalize_rejects_nan() {
        let v = cols(2, &[&[(f64::NAN, 0.0), (0.0, 0.0)]]);
        assert!(matches!(
            S::orthonormalize(&v, &tol()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn complement_examples() {
        let e1 = S::coordinate(2, &[0]).unwrap();
        assert!(e1
            .complement()
            .equals(&S::coordinate(2, &[1]).unwrap(), &tol())
            .unwrap());
        assert_eq!(S::zero(3).complement().dim(), 3);
        let h = 0.5f64.sqrt();
        let d = S::orthonormalize(&cols(2, &[&[(h, 0.0), (h, 0.0)]]), &tol()).unwrap();
        let anti = S::orthonormalize(&cols(2, &[&[(h, 0.0), (-h, 0.0)]]), &tol()).unwrap();
        assert!(d.complement().equals(&anti, &tol()).unwrap());
    }

    #[test]
    fn intersect_and_sum_examples() {
        let e1 = S::coordinate(2, &[0]).unwrap();
        let e2 = S::coordinate(2, &[1]).unwrap();
        let (i, s) = e1.intersect_and_sum(&e2, &tol()).unwrap();
        assert_eq!((i.dim(), s.dim()), (0, 2));

        let (i, s) = e1.intersect_and_sum(&e1, &tol()).unwrap();
        assert!(i.equals(&e1, &tol()).unwrap() && s.equals(&e1, &tol()).unwrap());

        // Brute force: x = a e1 + b e2 = c e2 + d e3 forces a = d = 0, b = c.
        let u = S::coordinate(3, &[0, 1]).unwrap();
        let v = S::coordinate(3, &[1, 2]).unwrap();
        let (i, s) = u.intersect_and_sum(&v, &tol()).unwrap();
        assert!(i.equals(&S::coordinate(3, &[1]).unwrap(), &tol()).unwrap());
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn intersect_rejects_mismatch() {
        assert!(matches!(
            S::zero(2).intersect(&S::zero(3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn project_examples() {
        let e1 = S::coordinate(2, &[0]).unwrap();
        let p = e1.project(&cols(2, &[&[(3.0, 0.0), (4.0, 0.0)]])).unwrap();
        assert!((p - cols(2, &[&[(3.0, 0.0), (0.0, 0.0)]])).norm() < 1e-15);

        let h = 0.5f64.sqrt();
        let d = S::orthonormalize(&cols(2, &[&[(h, 0.0), (h, 0.0)]]), &tol()).unwrap();
        let p = d.project(&cols(2, &[&[(1.0, 0.0), (0.0, 0.0)]])).unwrap();
        // <v,u>u = (1/√2)(1/√2, 1/√2)
        assert!((p - cols(2, &[&[(0.5, 0.0), (0.5, 0.0)]])).norm() < 1e-15);
    }

    #[test]
    fn compare_examples() {
        let e1 = S::coordinate(2, &[0]).unwrap();
        let e2 = S::coordinate(2, &[1]).unwrap();
        assert_eq!(e1.compare(&e1, &tol()).unwrap(), Comparison::Equal);
        assert_eq!(
            e1.compare(&S::full(2), &tol()).unwrap(),
            Comparison::SubsetOf
        );
        assert_eq!(
            S::full(2).compare(&e1, &tol()).unwrap(),
            Comparison::SupersetOf
        );
        assert_eq!(e1.compare(&e2, &tol()).unwrap(), Comparison::Incomparable);
        assert_eq!(
            S::zero(2).compare(&e2, &tol()).unwrap(),
            Comparison::SubsetOf
        );
    }

    #[test]
    fn principal_angles_between_lines() {
        let e1 = S::coordinate(2, &[0]).unwrap();
        let h = 0.5f64.sqrt();
        let d = S::orthonormalize(&cols(2, &[&[(h, 0.0), (h, 0.0)]]), &tol()).unwrap();
        let a = e1.principal_angles(&d).unwrap();
        assert!((a[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let t = Tolerance::<f32>::default();
        let u = Subspace::<f32>::coordinate(3, &[0, 1]).unwrap();
        let v = Subspace::<f32>::coordinate(3, &[1, 2]).unwrap();
        let (i, s) = u.intersect_and_sum(&v, &t).unwrap();
        assert_eq!((i.dim(), s.dim()), (1, 3));
    }
}
