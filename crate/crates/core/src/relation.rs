//! Linear relations on `X = C^n`, stored as subspaces of `X × X = C^{2n}`.
//!
//! The first `n` coordinates of a graph vector are the argument `x`, the last
//! `n` the value `f`. The product space carries the inner product
//! `⟨(x,f),(y,g)⟩ = ⟨x,y⟩ + ⟨f,g⟩`, so orthogonality of pairs is ordinary
//! orthogonality in `C^{2n}`.

use num_complex::Complex;

use crate::dense::{self, vstack};
use crate::error::{ensure_dim, Error, Result};
use crate::scalar::{CMat, Real};
use crate::subspace::{Comparison, Subspace};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearRelation<R: Real> {
    n: usize,
    graph: Subspace<R>,
}

/// Domain, range, multivalued part and kernel of a relation.
#[derive(Debug, Clone)]
pub struct GraphParts<R: Real> {
    pub domain: Subspace<R>,
    pub range: Subspace<R>,
    /// `T(0) = {f : (0, f) ∈ T}`.
    pub mul_part: Subspace<R>,
    /// `{x : (x, 0) ∈ T}`.
    pub kernel: Subspace<R>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Classification {
    NotHermitian,
    /// `T ⊊ T*`.
    HermitianProper,
    SelfAdjoint,
}

impl Classification {
    pub fn is_hermitian(self) -> bool {
        self >= Classification::HermitianProper
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform<R> {
    /// `(x, f) ↦ (x, α f)`.
    Scale(Complex<R>),
    /// `(x, f) ↦ (x, f − λ x)`, i.e. `T − λI`.
    Shift(Complex<R>),
    /// `(x, f) ↦ (f, x)`.
    Invert,
}

/// Arens split `T = T_s ⊕ T_∞` of a relation.
#[derive(Debug, Clone)]
pub struct Decomposition<R: Real> {
    /// `D(T_s) = D(T)`, with the orthonormal basis every column of
    /// `op_matrix` refers to.
    pub domain: Subspace<R>,
    /// `n × dim D(T)`; column `j` is `T_s` applied to domain basis vector `j`.
    pub op_matrix: CMat<R>,
    pub mul_part: Subspace<R>,
    /// `{0} × T(0)`.
    pub t_infinity: LinearRelation<R>,
    /// Graph of `T_s`, the orthogonal complement of `T_∞` inside `T`.
    pub operator_graph: LinearRelation<R>,
}

/// SVD split of one block of an orthonormal graph basis.
struct BlockSplit<R: Real> {
    left: CMat<R>,
    sigma: Vec<R>,
    right: CMat<R>,
    null: CMat<R>,
    cutoff: R,
}

fn split_block<R: Real>(block: &CMat<R>, tol: &Tolerance<R>) -> BlockSplit<R> {
    let (rows, cols) = block.shape();
    let cutoff = tol.rank_cutoff(R::one(), rows, cols);
    let dec = dense::svd(block);
    let r = dec.rank_above(cutoff);
    let right = dec.v.columns(0, r).into_owned();
    BlockSplit {
        left: dec.u.columns(0, r).into_owned(),
        sigma: dec.sigma[..r].to_vec(),
        null: dense::complement_of_orthonormal(&right),
        right,
        cutoff,
    }
}

impl<R: Real> LinearRelation<R> {
    pub fn from_graph(graph: Subspace<R>) -> Result<Self> {
        let m = graph.ambient_dim();
        if !m.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "graph ambient dimension {m} is odd"
            )));
        }
        Ok(Self { n: m / 2, graph })
    }

    /// Span of the pairs `(x_j, f_j)` given column-wise.
    pub fn from_pairs(xs: &CMat<R>, fs: &CMat<R>, tol: &Tolerance<R>) -> Result<Self> {
        ensure_dim(xs.nrows(), fs.nrows())?;
        ensure_dim(xs.ncols(), fs.ncols())?;
        let graph = Subspace::orthonormalize(&vstack(xs, fs), tol)?;
        Self::from_graph(graph)
    }

    /// Graph of a square matrix, defined on all of `X`.
    pub fn operator(m: &CMat<R>) -> Result<Self> {
        ensure_dim(m.nrows(), m.ncols())?;
        Self::operator_on(&Subspace::full(m.nrows()), m)
    }

    /// `{(x, M x) : x ∈ domain}`.
    pub fn operator_on(domain: &Subspace<R>, m: &CMat<R>) -> Result<Self> {
        ensure_dim(m.nrows(), m.ncols())?;
        ensure_dim(m.ncols(), domain.ambient_dim())?;
        if !dense::all_finite(m) {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        let xs = domain.basis();
        Ok(Self::from_independent_pairs(xs, &dense::mul(m, xs)))
    }

    /// `{(x, M x) : x ∈ domain} ⊕ ({0} × mul)`. Both pieces have independent
    /// columns and meet only in zero, so no rank decision is needed.
    pub(crate) fn operator_with_mul(
        domain: &Subspace<R>,
        m: &CMat<R>,
        mul: &Subspace<R>,
    ) -> Result<Self> {
        ensure_dim(m.nrows(), m.ncols())?;
        ensure_dim(m.ncols(), domain.ambient_dim())?;
        ensure_dim(m.ncols(), mul.ambient_dim())?;
        if !dense::all_finite(m) {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        let n = m.nrows();
        let xs = dense::hstack(n, &[domain.basis(), &CMat::zeros(n, mul.dim())]);
        let fs = dense::hstack(n, &[&dense::mul(m, domain.basis()), mul.basis()]);
        Ok(Self::from_independent_pairs(&xs, &fs))
    }

    fn from_independent_pairs(xs: &CMat<R>, fs: &CMat<R>) -> Self {
        Self {
            n: xs.nrows(),
            graph: Subspace::from_orthonormal(dense::thin_q(&vstack(xs, fs))),
        }
    }

    /// `{0} × M`.
    pub fn multivalued(mul: &Subspace<R>) -> Self {
        let n = mul.ambient_dim();
        let basis = vstack(&CMat::zeros(n, mul.dim()), mul.basis());
        Self {
            n,
            graph: Subspace::from_orthonormal(basis),
        }
    }

    pub fn identity(n: usize) -> Self {
        let s = R::lit(0.5).sqrt();
        let half = CMat::<R>::identity(n, n) * Complex::new(s, R::zero());
        Self {
            n,
            graph: Subspace::from_orthonormal(vstack(&half, &half)),
        }
    }

    /// Graph of the zero operator on all of `X`, i.e. `X × {0}`.
    pub fn zero_operator(n: usize) -> Self {
        Self {
            n,
            graph: Subspace::from_orthonormal(vstack(&CMat::identity(n, n), &CMat::zeros(n, n))),
        }
    }

    /// The relation `{(0, 0)}`.
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            graph: Subspace::zero(2 * n),
        }
    }

    pub fn space_dim(&self) -> usize {
        self.n
    }

    /// Dimension of the graph.
    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn graph(&self) -> &Subspace<R> {
        &self.graph
    }

    pub(crate) fn x_block(&self) -> CMat<R> {
        self.graph.basis().rows(0, self.n).into_owned()
    }

    pub(crate) fn f_block(&self) -> CMat<R> {
        self.graph.basis().rows(self.n, self.n).into_owned()
    }

    fn span_of_pairs(&self, xs: &CMat<R>, fs: &CMat<R>, scale: R, tol: &Tolerance<R>) -> Self {
        Self {
            n: self.n,
            graph: Subspace::span_scaled(&vstack(xs, fs), scale, tol),
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        ensure_dim(self.n, other.n)
    }

    pub fn compare(&self, other: &Self, tol: &Tolerance<R>) -> Result<Comparison> {
        self.same_space(other)?;
        self.graph.compare(&other.graph, tol)
    }

    pub fn equals(&self, other: &Self, tol: &Tolerance<R>) -> Result<bool> {
        Ok(self.compare(other, tol)? == Comparison::Equal)
    }

    pub fn is_subrelation_of(&self, other: &Self, tol: &Tolerance<R>) -> Result<bool> {
        self.same_space(other)?;
        self.graph.is_subspace_of(&other.graph, tol)
    }

    /// Whether `(x, f)` lies in the graph, with `x` and `f` single columns.
    pub fn contains_pair(&self, x: &CMat<R>, f: &CMat<R>, tol: &Tolerance<R>) -> Result<bool> {
        ensure_dim(self.n, x.nrows())?;
        ensure_dim(self.n, f.nrows())?;
        let v = vstack(x, f);
        let scale = v.norm().max(R::one());
        let resid = &v - self.graph.project(&v)?;
        Ok(resid.norm() <= tol.residual_tol * scale)
    }

    /// `T ⊕ S` as the span of both graphs.
    pub fn span_with(&self, other: &Self, tol: &Tolerance<R>) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            n: self.n,
            graph: self.graph.sum(&other.graph, tol)?,
        })
    }

    pub fn domain(&self, tol: &Tolerance<R>) -> Subspace<R> {
        Subspace::from_orthonormal(split_block(&self.x_block(), tol).left)
    }

    pub fn range(&self, tol: &Tolerance<R>) -> Subspace<R> {
        Subspace::from_orthonormal(split_block(&self.f_block(), tol).left)
    }

    pub fn mul_part(&self, tol: &Tolerance<R>) -> Subspace<R> {
        let split = split_block(&self.x_block(), tol);
        Subspace::from_orthonormal(self.f_block() * split.null)
    }

    pub fn kernel(&self, tol: &Tolerance<R>) -> Subspace<R> {
        let split = split_block(&self.f_block(), tol);
        Subspace::from_orthonormal(self.x_block() * split.null)
    }

    pub fn graph_parts(&self, tol: &Tolerance<R>) -> GraphParts<R> {
        let gx = self.x_block();
        let gf = self.f_block();
        let sx = split_block(&gx, tol);
        let sf = split_block(&gf, tol);
        GraphParts {
            mul_part: Subspace::from_orthonormal(&gf * &sx.null),
            kernel: Subspace::from_orthonormal(&gx * &sf.null),
            domain: Subspace::from_orthonormal(sx.left),
            range: Subspace::from_orthonormal(sf.left),
        }
    }

    /// `T* = (J T)^⊥` with `J(x, f) = (−f, x)`.
    pub fn adjoint(&self) -> Self {
        let flipped = vstack(&(-self.f_block()), &self.x_block());
        Self {
            n: self.n,
            graph: Subspace::from_orthonormal(flipped).complement(),
        }
    }

    /// Arens decomposition into operator part and pure multivalued part.
    pub fn decompose(&self, tol: &Tolerance<R>) -> Result<Decomposition<R>> {
        let gx = self.x_block();
        let gf = self.f_block();
        let split = split_block(&gx, tol);
        let guard = split.cutoff * R::lit(100.0);
        if let Some(&s) = split.sigma.iter().find(|&&s| s < guard) {
            return Err(Error::Ambiguity(format!(
                "domain singular value {} within 100x of the rank cutoff {}",
                s.as_f64(),
                split.cutoff.as_f64()
            )));
        }
        let mut op_matrix = dense::mul(&gf, &split.right);
        for (mut col, &s) in op_matrix.column_iter_mut().zip(&split.sigma) {
            col.unscale_mut(s);
        }
        let mul_part = Subspace::from_orthonormal(dense::mul(&gf, &split.null));
        let operator_graph = Self {
            n: self.n,
            graph: Subspace::from_orthonormal(dense::mul(self.graph.basis(), &split.right)),
        };
        Ok(Decomposition {
            domain: Subspace::from_orthonormal(split.left),
            op_matrix,
            t_infinity: Self::multivalued(&mul_part),
            mul_part,
            operator_graph,
        })
    }

    /// `T + S = {(x, f + g) : (x, f) ∈ T, (x, g) ∈ S}`.
    pub fn sum(&self, other: &Self, tol: &Tolerance<R>) -> Result<Self> {
        self.same_space(other)?;
        if let Some(m) = other.everywhere_defined(tol) {
            return Ok(self.plus_operator(&m));
        }
        if let Some(m) = self.everywhere_defined(tol) {
            return Ok(other.plus_operator(&m));
        }
        let n = self.n;
        let (gx, gf) = (self.x_block(), self.f_block());
        let (hx, hf) = (other.x_block(), other.f_block());
        let (k1, k2) = (gx.ncols(), hx.ncols());
        // Coefficient pairs (c, d) with G_x c = H_x d parametrise the common domain.
        let matching = dense::hstack(n, &[&gx, &(-&hx)]);
        let null = dense::null_space(&matching, tol.rank_cutoff(R::one(), n, k1 + k2));
        let c = null.rows(0, k1).into_owned();
        let d = null.rows(k1, k2).into_owned();
        let xs = dense::mul(&gx, &c);
        let fs = dense::mul(&gf, &c) + dense::mul(&hf, &d);
        Ok(self.span_of_pairs(&xs, &fs, R::one(), tol))
    }

    /// The matrix of `T` when `T` is an operator defined on all of `X`.
    fn everywhere_defined(&self, tol: &Tolerance<R>) -> Option<CMat<R>> {
        if self.dim() != self.n {
            return None;
        }
        let dec = self.decompose(tol).ok()?;
        (dec.domain.dim() == self.n).then(|| dec.operator_matrix())
    }

    /// `{(x, f + M x) : (x, f) ∈ T}`. The spanning pairs stay independent
    /// because for `c ≠ 0`, `G_x c = 0` forces `G_f c ≠ 0`.
    fn plus_operator(&self, m: &CMat<R>) -> Self {
        let gx = self.x_block();
        let fs = self.f_block() + dense::mul(m, &gx);
        Self::from_independent_pairs(&gx, &fs)
    }

    pub fn transform(&self, op: Transform<R>, tol: &Tolerance<R>) -> Self {
        let (gx, gf) = (self.x_block(), self.f_block());
        match op {
            Transform::Scale(alpha) => {
                let scale = nalgebra::ComplexField::modulus(alpha).max(R::one());
                self.span_of_pairs(&gx, &(gf * alpha), scale, tol)
            }
            Transform::Shift(lambda) => {
                let fs = gf - &gx * lambda;
                self.span_of_pairs(&gx, &fs, R::one(), tol)
            }
            Transform::Invert => Self {
                n: self.n,
                graph: Subspace::from_orthonormal(vstack(&gf, &gx)),
            },
        }
    }

    pub fn shift(&self, lambda: Complex<R>, tol: &Tolerance<R>) -> Self {
        self.transform(Transform::Shift(lambda), tol)
    }

    pub fn scale(&self, alpha: Complex<R>, tol: &Tolerance<R>) -> Self {
        self.transform(Transform::Scale(alpha), tol)
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            graph: Subspace::from_orthonormal(vstack(&self.f_block(), &self.x_block())),
        }
    }

    pub fn classify(&self, tol: &Tolerance<R>) -> Classification {
        let adj = self.adjoint();
        match self.graph.compare(&adj.graph, tol) {
            Ok(Comparison::Equal) => Classification::SelfAdjoint,
            Ok(Comparison::SubsetOf) => Classification::HermitianProper,
            _ => Classification::NotHermitian,
        }
    }

    /// `{(x, f) ∈ T : x ∈ sub}`.
    pub fn restrict_domain(&self, sub: &Subspace<R>, tol: &Tolerance<R>) -> Result<Self> {
        ensure_dim(self.n, sub.ambient_dim())?;
        let gx = self.x_block();
        let outside = &gx - sub.project(&gx)?;
        let null = dense::null_space(&outside, tol.rank_cutoff(R::one(), self.n, gx.ncols()));
        Ok(Self {
            n: self.n,
            graph: Subspace::from_orthonormal(dense::mul(self.graph.basis(), &null)),
        })
    }

    /// `P^{(2)} T ⊆ T` for the orthogonal projection `P` onto `sub`.
    pub fn is_reduced_by(&self, sub: &Subspace<R>, tol: &Tolerance<R>) -> Result<bool> {
        ensure_dim(self.n, sub.ambient_dim())?;
        let px = sub.project(&self.x_block())?;
        let pf = sub.project(&self.f_block())?;
        let projected = self.span_of_pairs(&px, &pf, R::one(), tol);
        projected.is_subrelation_of(self, tol)
    }

    /// `T ∩ (W × W)`.
    pub fn compress_to(&self, sub: &Subspace<R>, tol: &Tolerance<R>) -> Result<Self> {
        ensure_dim(self.n, sub.ambient_dim())?;
        let b = sub.basis();
        let zeros = CMat::zeros(self.n, b.ncols());
        let square = Subspace::from_orthonormal(dense::hstack(
            2 * self.n,
            &[&vstack(b, &zeros), &vstack(&zeros, b)],
        ));
        Ok(Self {
            n: self.n,
            graph: self.graph.intersect(&square, tol)?,
        })
    }
}

/// Matrix (on the ambient space) of the orthogonal projection with range
/// `target`, meant to act on `source`.
pub fn projection_between<R: Real>(
    source: &Subspace<R>,
    target: &Subspace<R>,
    tol: &Tolerance<R>,
) -> Result<CMat<R>> {
    if !target.is_subspace_of(source, tol)? {
        return Err(Error::ContainmentViolation);
    }
    Ok(target.projector())
}

impl<R: Real> Decomposition<R> {
    pub fn domain_dim(&self) -> usize {
        self.domain.dim()
    }

    /// `T_s x` for columns `x` of the domain.
    pub fn apply(&self, x: &CMat<R>) -> Result<CMat<R>> {
        ensure_dim(self.domain.ambient_dim(), x.nrows())?;
        Ok(dense::mul(
            &self.op_matrix,
            &dense::adjoint_mul(self.domain.basis(), x),
        ))
    }

    /// `T_s P_{D(T)}` as an `n × n` matrix.
    pub fn operator_matrix(&self) -> CMat<R> {
        dense::mul(&self.op_matrix, &self.domain.basis().adjoint())
    }

    /// `D^H T_s D`: the operator part compressed to its domain coordinates.
    pub fn compressed(&self) -> CMat<R> {
        dense::adjoint_mul(self.domain.basis(), &self.op_matrix)
    }

    /// Largest relative component of `T_s` values lying in `T(0)`.
    pub fn range_leak(&self) -> R {
        let leak = dense::adjoint_mul(self.mul_part.basis(), &self.op_matrix);
        let scale = dense::max_column_norm(&self.op_matrix).max(R::one());
        dense::max_column_norm(&leak) / scale
    }

    /// How far `graph(T_s) ⊕ T_∞` is from reproducing `t`.
    pub fn reconstruction_residual(&self, t: &LinearRelation<R>) -> Result<R> {
        let gs = self.operator_graph.graph();
        let gi = self.t_infinity.graph();
        if gs.dim() + gi.dim() != t.dim() {
            return Ok(R::one());
        }
        let cross = gs.basis().adjoint() * gi.basis();
        let orth = dense::spectral_norm(&cross);
        let joined =
            Subspace::from_orthonormal(dense::hstack(gs.ambient_dim(), &[gs.basis(), gi.basis()]));
        let a = joined.containment_gap(t.graph())?;
        let b = t.graph().containment_gap(&joined)?;
        Ok(orth.max(a).max(b))
    }

    /// Graph of `T ∩ (T(0)^⊥)²`, the operator part as characterised for
    /// Hermitian relations.
    pub fn intersection_route(
        &self,
        t: &LinearRelation<R>,
        tol: &Tolerance<R>,
    ) -> Result<LinearRelation<R>> {
        t.compress_to(&self.mul_part.complement(), tol)
    }

    /// For Hermitian `t`, whether both characterisations of `T_s` agree.
    /// `None` when `t` is not Hermitian.
    pub fn routes_agree(&self, t: &LinearRelation<R>, tol: &Tolerance<R>) -> Result<Option<bool>> {
        if !t.classify(tol).is_hermitian() {
            return Ok(None);
        }
        let via_intersection = self.intersection_route(t, tol)?;
        Ok(Some(via_intersection.equals(&self.operator_graph, tol)?))
    }
}
