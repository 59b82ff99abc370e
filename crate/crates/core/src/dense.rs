//! Dense complex linear-algebra helpers shared by the subspace and relation layers.

use faer::{c64, Mat, MatRef, Side};
use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::scalar::{CMat, Real};

/// Thin SVD with singular values sorted in nonincreasing order.
pub(crate) struct ThinSvd<R: Real> {
    pub u: CMat<R>,
    pub sigma: Vec<R>,
    pub v: CMat<R>,
}

impl<R: Real> ThinSvd<R> {
    pub fn rank_above(&self, cutoff: R) -> usize {
        self.sigma.iter().take_while(|&&s| s > cutoff).count()
    }

    pub fn largest(&self) -> R {
        self.sigma.first().copied().unwrap_or_else(R::zero)
    }
}

// Decompositions run through faer in f64. nalgebra's complex SVD returns
// inaccurate factors for some rank-deficient inputs, which corrupts null spaces.
fn to_faer<R: Real>(m: &CMat<R>) -> Mat<c64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        c64::new(z.re.as_f64(), z.im.as_f64())
    })
}

fn from_faer<R: Real>(m: MatRef<'_, c64>, cols: &[usize]) -> CMat<R> {
    CMat::from_fn(m.nrows(), cols.len(), |i, j| {
        let z = m[(i, cols[j])];
        Complex::new(R::lit(z.re), R::lit(z.im))
    })
}

fn from_faer_full<R: Real>(m: MatRef<'_, c64>) -> CMat<R> {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        Complex::new(R::lit(z.re), R::lit(z.im))
    })
}

// nalgebra multiplies complex matrices with scalar loops; past this many
// multiply-adds the copy into faer's blocked kernels pays for itself.
const FAER_PRODUCT_WORK: usize = 1 << 15;

/// `a b`.
pub(crate) fn mul<R: Real>(a: &CMat<R>, b: &CMat<R>) -> CMat<R> {
    if a.nrows() * a.ncols() * b.ncols() < FAER_PRODUCT_WORK {
        return a * b;
    }
    from_faer_full((to_faer(a) * to_faer(b)).as_ref())
}

/// `aᴴ b`.
pub(crate) fn adjoint_mul<R: Real>(a: &CMat<R>, b: &CMat<R>) -> CMat<R> {
    if a.nrows() * a.ncols() * b.ncols() < FAER_PRODUCT_WORK {
        return a.adjoint() * b;
    }
    from_faer_full((to_faer(a).adjoint() * to_faer(b)).as_ref())
}

fn order_by<F: Fn(usize, usize) -> std::cmp::Ordering>(k: usize, cmp: F) -> Vec<usize> {
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| cmp(a, b));
    order
}

pub(crate) fn svd<R: Real>(m: &CMat<R>) -> ThinSvd<R> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return ThinSvd {
            u: CMat::zeros(rows, 0),
            sigma: Vec::new(),
            v: CMat::zeros(cols, 0),
        };
    }
    let dec = to_faer(m)
        .thin_svd()
        .expect("SVD of a finite matrix converges");
    let s: Vec<f64> = dec.S().column_vector().iter().map(|z| z.re).collect();
    let order = order_by(s.len(), |a, b| s[b].total_cmp(&s[a]));
    ThinSvd {
        u: from_faer(dec.U(), &order),
        sigma: order.iter().map(|&i| R::lit(s[i])).collect(),
        v: from_faer(dec.V(), &order),
    }
}

pub(crate) fn singular_values<R: Real>(m: &CMat<R>) -> Vec<R> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s = to_faer(m)
        .singular_values()
        .expect("SVD of a finite matrix converges");
    s.sort_by(|a, b| b.total_cmp(a));
    s.into_iter().map(R::lit).collect()
}

pub(crate) fn spectral_norm<R: Real>(m: &CMat<R>) -> R {
    singular_values(m).first().copied().unwrap_or_else(R::zero)
}

/// Orthonormal basis of the orthogonal complement of the span of an
/// orthonormal `m × k` basis.
pub(crate) fn complement_of_orthonormal<R: Real>(basis: &CMat<R>) -> CMat<R> {
    let (m, k) = basis.shape();
    if k == 0 {
        return CMat::identity(m, m);
    }
    if k >= m {
        return CMat::zeros(m, 0);
    }
    // Full Householder QR of B: the trailing m − k columns of Q span B^⊥.
    let q = to_faer(basis).qr().compute_Q();
    let cols: Vec<usize> = (k..m).collect();
    from_faer(q.as_ref(), &cols)
}

/// Orthonormal basis for the span of columns known to be linearly independent.
pub(crate) fn thin_q<R: Real>(m: &CMat<R>) -> CMat<R> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return CMat::zeros(rows, 0);
    }
    from_faer_full(to_faer(m).qr().compute_thin_Q().as_ref())
}

/// Orthonormal basis of `{c : M c ≈ 0}` (columns of size `cols`).
pub(crate) fn null_space<R: Real>(m: &CMat<R>, cutoff: R) -> CMat<R> {
    let dec = svd(m);
    let r = dec.rank_above(cutoff);
    let row_space = dec.v.columns(0, r).into_owned();
    complement_of_orthonormal(&row_space)
}

pub(crate) fn hermitian_eigenvalues<R: Real>(h: &CMat<R>) -> Vec<R> {
    if h.nrows() == 0 {
        return Vec::new();
    }
    let mut w = to_faer(&hermitian_part(h))
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("Hermitian eigensolver converges");
    w.sort_by(|a, b| a.total_cmp(b));
    w.into_iter().map(R::lit).collect()
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub(crate) fn symmetric_eigenvalues<R: Real>(h: &DMatrix<R>) -> Vec<R> {
    let n = h.nrows();
    if n == 0 {
        return Vec::new();
    }
    let sym = Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (h[(i, j)].as_f64() + h[(j, i)].as_f64()));
    let mut w = sym
        .self_adjoint_eigenvalues(Side::Lower)
        .expect("symmetric eigensolver converges");
    w.sort_by(|a, b| a.total_cmp(b));
    w.into_iter().map(R::lit).collect()
}

pub(crate) fn hermitian_part<R: Real>(h: &CMat<R>) -> CMat<R> {
    let half = Complex::new(R::lit(0.5), R::zero());
    (h + h.adjoint()) * half
}

pub(crate) fn all_finite<R: Real>(m: &CMat<R>) -> bool {
    m.iter().all(ComplexField::is_finite)
}

pub(crate) fn max_column_norm<R: Real>(m: &CMat<R>) -> R {
    m.column_iter()
        .map(|c| c.norm())
        .fold(R::zero(), |a, b| if b > a { b } else { a })
}

/// Largest column-wise deviation `‖a_j − b_j‖ / max(1, ‖a_j‖)`.
pub(crate) fn relative_column_residual<R: Real>(a: &CMat<R>, b: &CMat<R>) -> R {
    let mut worst = R::zero();
    for (ca, cb) in a.column_iter().zip(b.column_iter()) {
        let scale = ca.norm().max(R::one());
        let dev = (ca - cb).norm() / scale;
        if dev > worst {
            worst = dev;
        }
    }
    worst
}

pub(crate) fn hstack<R: Real>(rows: usize, blocks: &[&CMat<R>]) -> CMat<R> {
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        debug_assert_eq!(b.nrows(), rows);
        out.view_mut((0, at), (rows, b.ncols())).copy_from(*b);
        at += b.ncols();
    }
    out
}

pub(crate) fn vstack<R: Real>(top: &CMat<R>, bottom: &CMat<R>) -> CMat<R> {
    debug_assert_eq!(top.ncols(), bottom.ncols());
    let cols = top.ncols();
    let mut out = CMat::zeros(top.nrows() + bottom.nrows(), cols);
    out.view_mut((0, 0), (top.nrows(), cols)).copy_from(top);
    out.view_mut((top.nrows(), 0), (bottom.nrows(), cols))
        .copy_from(bottom);
    out
}
