//! Resolvent sets, spectra of self-adjoint relations, resolvent matrices and
//! numeric rank.
//!
//! For a relation with orthonormal graph basis `[G_x; G_f]`, the shifted
//! inverse is `(T − λI)^{-1} = {(G_f c − λ G_x c, G_x c)}`. It is an
//! everywhere-defined operator exactly when `dim T = n` and `G_f − λ G_x` is
//! invertible, and then its matrix is `G_x (G_f − λ G_x)^{-1}`.

use num_complex::Complex;
use serde::Serialize;

use crate::dense;
use crate::error::{ensure_dim, Error, Result};
use crate::relation::{Classification, LinearRelation};
use crate::scalar::{CMat, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

/// Eigenvalues of the operator part of a self-adjoint relation.
#[derive(Debug, Clone)]
pub struct SpectrumReport<R: Real> {
    /// Distinct eigenvalues in ascending real order, with multiplicities.
    pub eigenvalues: Vec<(Complex<R>, usize)>,
    /// `T(0)^⊥`, the space the operator part acts in.
    pub space: Subspace<R>,
    pub mul_dim: usize,
}

impl<R: Real> SpectrumReport<R> {
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|(_, m)| m).sum()
    }

    /// Eigenvalues repeated by multiplicity.
    pub fn values(&self) -> Vec<Complex<R>> {
        self.eigenvalues
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m))
            .collect()
    }
}

/// `B = (T − λI)^{-1} − (S − λI)^{-1}` with its singular profile.
#[derive(Debug, Clone)]
pub struct ResolventDifference<R: Real> {
    pub lambda: Complex<R>,
    pub matrix: CMat<R>,
    /// Nonincreasing.
    pub singular_values: Vec<R>,
    pub numeric_rank: usize,
}

/// JSON-friendly eigenvalue entry.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueEntry {
    pub value: [f64; 2],
    pub multiplicity: usize,
}

impl<R: Real> SpectrumReport<R> {
    pub fn entries(&self) -> Vec<EigenvalueEntry> {
        self.eigenvalues
            .iter()
            .map(|(v, m)| EigenvalueEntry {
                value: [v.re.as_f64(), v.im.as_f64()],
                multiplicity: *m,
            })
            .collect()
    }
}

fn shifted_block<R: Real>(t: &LinearRelation<R>, lambda: Complex<R>) -> (CMat<R>, CMat<R>) {
    let gx = t.x_block();
    let shifted = t.f_block() - &gx * lambda;
    (gx, shifted)
}

fn invertibility_cutoff<R: Real>(n: usize, lambda: Complex<R>, tol: &Tolerance<R>) -> R {
    let scale = R::one() + nalgebra::ComplexField::modulus(lambda);
    tol.rank_cutoff(scale, n, n)
}

/// Whether `(λI − T)^{-1}` is an everywhere-defined operator.
pub fn in_resolvent_set<R: Real>(
    t: &LinearRelation<R>,
    lambda: Complex<R>,
    tol: &Tolerance<R>,
) -> bool {
    let n = t.space_dim();
    if t.dim() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let (_, shifted) = shifted_block(t, lambda);
    let sigma = dense::singular_values(&shifted);
    sigma
        .last()
        .is_some_and(|&s| s > invertibility_cutoff(n, lambda, tol))
}

/// Matrix of `(T − λI)^{-1}` on `X`.
pub fn resolvent_matrix<R: Real>(
    t: &LinearRelation<R>,
    lambda: Complex<R>,
    tol: &Tolerance<R>,
) -> Result<CMat<R>> {
    if !in_resolvent_set(t, lambda, tol) {
        return Err(Error::LambdaInSpectrum {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
        });
    }
    let n = t.space_dim();
    let (gx, shifted) = shifted_block(t, lambda);
    let coeffs = shifted
        .lu()
        .solve(&CMat::<R>::identity(n, n))
        .ok_or(Error::LambdaInSpectrum {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
        })?;
    Ok(gx * coeffs)
}

/// Spectrum of a self-adjoint relation, read off its operator part.
pub fn spectrum<R: Real>(t: &LinearRelation<R>, tol: &Tolerance<R>) -> Result<SpectrumReport<R>> {
    if t.classify(tol) != Classification::SelfAdjoint {
        return Err(Error::NotSelfAdjoint);
    }
    let dec = t.decompose(tol)?;
    let vals = dense::hermitian_eigenvalues(&dec.compressed());
    Ok(SpectrumReport {
        eigenvalues: merge_eigenvalues(&vals),
        space: dec.mul_part.complement(),
        mul_dim: dec.mul_part.dim(),
    })
}

/// Groups ascending reals whose gap is within `1e-8 · max(1, |λ|)` of the
/// first member of the group.
fn merge_eigenvalues<R: Real>(sorted: &[R]) -> Vec<(Complex<R>, usize)> {
    let rel = R::lit(1e-8);
    let mut out: Vec<(Complex<R>, usize)> = Vec::new();
    let mut lead = R::zero();
    for &v in sorted {
        match out.last_mut() {
            Some((_, count)) if (v - lead).abs() <= rel * lead.abs().max(R::one()) => *count += 1,
            _ => {
                lead = v;
                out.push((Complex::new(v, R::zero()), 1));
            }
        }
    }
    out
}

pub fn resolvent_difference<R: Real>(
    t: &LinearRelation<R>,
    s: &LinearRelation<R>,
    lambda: Complex<R>,
    tol: &Tolerance<R>,
) -> Result<ResolventDifference<R>> {
    ensure_dim(t.space_dim(), s.space_dim())?;
    let rt = resolvent_matrix(t, lambda, tol)?;
    let rs = resolvent_matrix(s, lambda, tol)?;
    let scale = dense::spectral_norm(&rt).max(dense::spectral_norm(&rs));
    let matrix = rt - rs;
    let singular_values = dense::singular_values(&matrix);
    let numeric_rank = rank_of_profile(&singular_values, scale, matrix.shape(), tol);
    Ok(ResolventDifference {
        lambda,
        matrix,
        singular_values,
        numeric_rank,
    })
}

fn rank_of_profile<R: Real>(
    sigma: &[R],
    scale: R,
    shape: (usize, usize),
    tol: &Tolerance<R>,
) -> usize {
    let cutoff = tol.rank_cutoff(scale, shape.0, shape.1);
    sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Number of singular values above `rank_rel_tol · σ_max · max(rows, cols)`.
pub fn numeric_rank<R: Real>(m: &CMat<R>, tol: &Tolerance<R>) -> usize {
    let sigma = dense::singular_values(m);
    let top = sigma.first().copied().unwrap_or_else(R::zero);
    if top == R::zero() {
        return 0;
    }
    rank_of_profile(&sigma, top, m.shape(), tol)
}

/// Numeric rank against an external magnitude, for matrices formed as
/// differences of quantities of size `scale`. Cancellation noise then counts
/// as zero instead of being promoted by its own `σ_max`.
pub fn numeric_rank_scaled<R: Real>(m: &CMat<R>, scale: R, tol: &Tolerance<R>) -> usize {
    rank_of_profile(&dense::singular_values(m), scale, m.shape(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, real_matrix};

    type Rel = LinearRelation<f64>;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    fn free_jacobi(n: usize) -> CMat<f64> {
        CMat::from_fn(n, n, |i, j| {
            if i.abs_diff(j) == 1 {
                cplx(1.0, 0.0)
            } else {
                cplx(0.0, 0.0)
            }
        })
    }

    /// `{(x, x + c e1) : x1 = 0}` on `C^n`.
    fn example_s(n: usize) -> Rel {
        let x1 = Subspace::coordinate(n, &(1..n).collect::<Vec<_>>()).unwrap();
        Rel::operator_on(&x1, &CMat::identity(n, n))
            .unwrap()
            .span_with(
                &Rel::multivalued(&Subspace::coordinate(n, &[0]).unwrap()),
                &tol(),
            )
            .unwrap()
    }

    #[test]
    fn resolvent_set_examples() {
        let pm = Rel::multivalued(&Subspace::full(3));
        for l in [cplx(0.0, 0.0), cplx(1.0, 2.0), cplx(-5.0, 0.0)] {
            assert!(in_resolvent_set(&pm, l, &tol()));
        }
        let id = Rel::identity(3);
        assert!(!in_resolvent_set(&id, cplx(1.0, 0.0), &tol()));
        assert!(in_resolvent_set(&id, cplx(0.0, 0.0), &tol()));
        assert!(in_resolvent_set(&example_s(5), cplx(0.0, 1.0), &tol()));
    }

    #[test]
    fn hermitian_proper_relation_has_no_resolvent_points() {
        let t = Rel::identity(3)
            .restrict_domain(&Subspace::coordinate(3, &[0, 1]).unwrap(), &tol())
            .unwrap();
        assert!(!in_resolvent_set(&t, cplx(0.0, 1.0), &tol()));
    }

    #[test]
    fn spectrum_examples() {
        let r = spectrum(&Rel::multivalued(&Subspace::full(2)), &tol()).unwrap();
        assert!(r.eigenvalues.is_empty());
        assert_eq!(r.mul_dim, 2);

        let r = spectrum(&example_s(6), &tol()).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert!((r.eigenvalues[0].0 - cplx(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(r.eigenvalues[0].1, 5);

        let n = 9;
        let r = spectrum(&Rel::operator(&free_jacobi(n)).unwrap(), &tol()).unwrap();
        assert_eq!(r.total_multiplicity(), n);
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, e) in r.values().iter().zip(&exact) {
            assert!((v.re - e).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_rejects_non_self_adjoint() {
        let t = Rel::operator(&real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert_eq!(spectrum(&t, &tol()).unwrap_err(), Error::NotSelfAdjoint);
    }

    #[test]
    fn resolvent_matrix_examples() {
        let r = resolvent_matrix(&Rel::identity(3), cplx(0.0, 0.0), &tol()).unwrap();
        assert!((r - CMat::identity(3, 3)).norm() < 1e-14);

        let r = resolvent_matrix(
            &Rel::multivalued(&Subspace::full(2)),
            cplx(0.0, 0.0),
            &tol(),
        )
        .unwrap();
        assert!(r.norm() < 1e-15);

        let r = resolvent_matrix(&example_s(4), cplx(0.0, 0.0), &tol()).unwrap();
        let expect = real_matrix(
            4,
            4,
            &[
                0.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        );
        assert!((r - expect).norm() < 1e-14);

        assert!(matches!(
            resolvent_matrix(&Rel::identity(2), cplx(1.0, 0.0), &tol()),
            Err(Error::LambdaInSpectrum { .. })
        ));
    }

    #[test]
    fn resolvent_satisfies_graph_membership() {
        let t = example_s(5)
            .sum(&Rel::operator(&free_jacobi(5)).unwrap(), &tol())
            .unwrap();
        let lambda = cplx(0.3, 1.0);
        let r = resolvent_matrix(&t, lambda, &tol()).unwrap();
        for j in 0..5 {
            let f = CMat::<f64>::identity(5, 5).columns(j, 1).into_owned();
            let x = &r * &f;
            let value = &f + &x * lambda;
            assert!(t.contains_pair(&x, &value, &tol()).unwrap());
        }
    }

    #[test]
    fn real_resolvent_is_hermitian_and_kills_multivalued_part() {
        let s = example_s(5);
        let r = resolvent_matrix(&s, cplx(0.25, 0.0), &tol()).unwrap();
        assert!((&r - r.adjoint()).norm() < 1e-12);
        let e1 = Subspace::<f64>::coordinate(5, &[0]).unwrap();
        assert!((&r * e1.basis()).norm() < 1e-14);
    }

    #[test]
    fn resolvent_difference_examples() {
        let s = example_s(4);
        let d = resolvent_difference(&s, &s, cplx(0.0, 1.0), &tol()).unwrap();
        assert_eq!(d.numeric_rank, 0);
        assert!(d.matrix.norm() == 0.0);

        // Rank-one operator perturbation of a self-adjoint operator.
        let h = real_matrix(3, 3, &[1.0, 0.5, 0.0, 0.5, -1.0, 0.0, 0.0, 0.0, 2.0]);
        let v = real_matrix(3, 1, &[1.0, 2.0, -1.0]);
        let a = &v * v.adjoint();
        let s = Rel::operator(&h).unwrap();
        let t = Rel::operator(&(&h + &a)).unwrap();
        let lambda = cplx(0.0, 1.0);
        let d = resolvent_difference(&t, &s, lambda, &tol()).unwrap();
        assert_eq!(d.numeric_rank, 1);
        let rt = resolvent_matrix(&t, lambda, &tol()).unwrap();
        let rs = resolvent_matrix(&s, lambda, &tol()).unwrap();
        let second = -(rt * a * rs);
        assert!((d.matrix - second).norm() < 1e-12);
    }

    #[test]
    fn numeric_rank_examples() {
        assert_eq!(numeric_rank(&CMat::<f64>::zeros(3, 4), &tol()), 0);
        assert_eq!(numeric_rank(&CMat::<f64>::identity(5, 5), &tol()), 5);
        let u = real_matrix(3, 1, &[1.0, 2.0, 3.0]);
        let v = real_matrix(4, 1, &[0.0, 1.0, -1.0, 2.0]);
        assert_eq!(numeric_rank(&(u * v.adjoint()), &tol()), 1);
    }

    #[test]
    fn scaled_rank_ignores_cancellation_noise() {
        let noise =
            CMat::<f64>::from_fn(3, 3, |i, j| cplx(1e-17 * ((i + 1) * (j + 1)) as f64, 0.0));
        assert_eq!(numeric_rank(&noise, &tol()), 1);
        assert_eq!(numeric_rank_scaled(&noise, 1.0, &tol()), 0);
    }

    #[test]
    fn merges_close_eigenvalues() {
        let merged = merge_eigenvalues(&[1.0, 1.0 + 1e-12, 2.0, 3.0, 3.0]);
        let counts: Vec<usize> = merged.iter().map(|(_, m)| *m).collect();
        assert_eq!(counts, vec![2, 1, 2]);
    }
}
