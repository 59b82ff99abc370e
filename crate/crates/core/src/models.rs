//! Seeded generators for the relation families used by the verifiers and
//! experiments.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the model seed and
//! switched to a generator-specific stream, so instances are bit-identical
//! across runs and independent of the order in which they are produced.

use nalgebra::ComplexField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dense;
use crate::error::{ensure_dim, Error, Result};
use crate::relation::LinearRelation;
use crate::scalar::{cplx, CMat, Real};
use crate::subspace::Subspace;
use crate::tolerance::Tolerance;

pub(crate) mod stream {
    pub const JACOBI: u64 = 1;
    pub const BLOCK: u64 = 2;
    pub const RESTRICT: u64 = 3;
    pub const FINITE_RANK: u64 = 4;
    pub const TRIPLE: u64 = 5;
    pub const GATE: u64 = 6;
    pub const RELATION: u64 = 7;
    pub const PROBE: u64 = 8;
}

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Off-diagonal `a` (length `N − 1`) and diagonal `b` (length `N`) of a
/// Jacobi matrix truncated to `C^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiParams {
    #[serde(rename = "N")]
    pub size: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl JacobiParams {
    /// Coefficient bound used for random sequences.
    pub const DEFAULT_BOUND: f64 = 10.0;

    /// `a_n = 1`, `b_n = 0`.
    pub fn free(size: usize) -> Self {
        Self {
            size,
            a: vec![1.0; size.saturating_sub(1)],
            b: vec![0.0; size],
        }
    }

    /// Uniform coefficients in `[−bound, bound]`, with `|a_n| ≥ bound / 100`.
    pub fn random(seed: u64, size: usize, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::InvalidParams(format!("coefficient bound {bound}")));
        }
        let mut rng = seeded_rng(seed, stream::JACOBI);
        let floor = bound / 100.0;
        let a = (1..size)
            .map(|_| {
                let mag = rng.random_range(floor..=bound);
                if rng.random_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let b = (0..size)
            .map(|_| rng.random_range(-bound..=bound))
            .collect();
        let p = Self { size, a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.size < 2 {
            return Err(Error::InvalidParams(format!(
                "truncation size {} is below 2",
                self.size
            )));
        }
        if self.a.len() != self.size - 1 || self.b.len() != self.size {
            return Err(Error::InvalidParams(format!(
                "expected {} off-diagonal and {} diagonal coefficients, found {} and {}",
                self.size - 1,
                self.size,
                self.a.len(),
                self.b.len()
            )));
        }
        if let Some(i) = self.a.iter().position(|&x| x == 0.0) {
            return Err(Error::InvalidParams(format!("a[{}] is zero", i + 1)));
        }
        if self.a.iter().chain(&self.b).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        Ok(())
    }

    /// Tridiagonal matrix with `x_0 = 0` and Dirichlet truncation `x_{N+1} = 0`.
    pub fn matrix<R: Real>(&self) -> CMat<R> {
        let n = self.size;
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cplx(self.b[i], 0.0);
            if i + 1 < n {
                m[(i, i + 1)] = cplx(self.a[i], 0.0);
                m[(i + 1, i)] = cplx(self.a[i], 0.0);
            }
        }
        m
    }

    /// Real symmetric form of [`Self::matrix`].
    pub fn real_matrix<R: Real>(&self) -> nalgebra::DMatrix<R> {
        let n = self.size;
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::lit(self.b[i]);
            if i + 1 < n {
                m[(i, i + 1)] = R::lit(self.a[i]);
                m[(i + 1, i)] = R::lit(self.a[i]);
            }
        }
        m
    }
}

/// Shape of a random model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSeed {
    pub seed: u64,
    pub n: usize,
    /// Dimension of the prescribed multivalued part.
    pub mul_dim: usize,
    /// Rank of the perturbation term.
    pub rank_r: usize,
}

impl ModelSeed {
    pub fn new(seed: u64, n: usize, mul_dim: usize, rank_r: usize) -> Result<Self> {
        let m = Self {
            seed,
            n,
            mul_dim,
            rank_r,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mul_dim > self.n {
            return Err(Error::InvalidParams(format!(
                "mul_dim {} exceeds n {}",
                self.mul_dim, self.n
            )));
        }
        if self.rank_r > self.n - self.mul_dim {
            return Err(Error::RankTooLarge {
                rank: self.rank_r,
                available: self.n - self.mul_dim,
            });
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        seeded_rng(self.seed, stream)
    }
}

/// Complex Gaussian matrix with independent `N(0, 1/2)` real and imaginary parts.
pub fn complex_gaussian<R: Real>(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat<R> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        cplx(re * s, im * s)
    })
}

/// Random `k`-dimensional subspace of `C^m`.
pub fn random_subspace<R: Real>(rng: &mut impl Rng, m: usize, k: usize) -> Subspace<R> {
    random_subspace_within(rng, &Subspace::full(m), k)
}

/// Random `k`-dimensional subspace of `parent`.
pub fn random_subspace_within<R: Real>(
    rng: &mut impl Rng,
    parent: &Subspace<R>,
    k: usize,
) -> Subspace<R> {
    let p = parent.dim();
    let k = k.min(p);
    let g = complex_gaussian::<R>(rng, p, k);
    let frame = dense::svd(&g).u.columns(0, k).into_owned();
    Subspace::from_orthonormal(parent.basis() * frame)
}

/// `(G + Gᴴ)/2` for a square complex Gaussian `G`.
pub fn random_hermitian<R: Real>(rng: &mut impl Rng, n: usize) -> CMat<R> {
    dense::hermitian_part(&complex_gaussian(rng, n, n))
}

/// Random Hermitian matrix on `C^n` that maps `sub` into itself and vanishes
/// on `sub^⊥`.
pub fn random_hermitian_on<R: Real>(rng: &mut impl Rng, sub: &Subspace<R>) -> CMat<R> {
    let b = sub.basis();
    b * random_hermitian::<R>(rng, sub.dim()) * b.adjoint()
}

/// `Σ c_j v_j v_jᴴ`.
pub fn finite_rank_from_parts<R: Real>(coeffs: &[f64], vectors: &CMat<R>) -> Result<CMat<R>> {
    ensure_dim(coeffs.len(), vectors.ncols())?;
    let n = vectors.nrows();
    let mut m = CMat::zeros(n, n);
    for (j, &c) in coeffs.iter().enumerate() {
        let v = vectors.column(j);
        m += v * v.adjoint() * cplx::<R>(c, 0.0);
    }
    Ok(m)
}

/// Matrix `Σ_{j≤r} c_j v_j v_jᴴ` with orthonormal `v_j` inside `vectors_in`
/// and `|c_j| ∈ [1/2, 5]` of random sign.
pub fn finite_rank_matrix<R: Real>(seed: &ModelSeed, vectors_in: &Subspace<R>) -> Result<CMat<R>> {
    ensure_dim(seed.n, vectors_in.ambient_dim())?;
    if seed.rank_r > vectors_in.dim() {
        return Err(Error::RankTooLarge {
            rank: seed.rank_r,
            available: vectors_in.dim(),
        });
    }
    let mut rng = seed.rng(stream::FINITE_RANK);
    finite_rank_with(&mut rng, seed.rank_r, vectors_in)
}

fn finite_rank_with<R: Real>(
    rng: &mut impl Rng,
    r: usize,
    vectors_in: &Subspace<R>,
) -> Result<CMat<R>> {
    let v = random_subspace_within(rng, vectors_in, r);
    let coeffs: Vec<f64> = (0..r)
        .map(|_| {
            let mag = rng.random_range(0.5..=5.0);
            if rng.random_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    finite_rank_from_parts(&coeffs, v.basis())
}

/// Graph of [`finite_rank_matrix`], defined on all of `X`.
pub fn finite_rank_hermitian<R: Real>(
    seed: &ModelSeed,
    vectors_in: &Subspace<R>,
) -> Result<LinearRelation<R>> {
    LinearRelation::operator(&finite_rank_matrix(seed, vectors_in)?)
}

/// `{(x, H x + m) : x ∈ domain, m ∈ mul}`.
pub fn hermitian_block<R: Real>(
    domain: &Subspace<R>,
    h: &CMat<R>,
    mul: &Subspace<R>,
) -> Result<LinearRelation<R>> {
    LinearRelation::operator_with_mul(domain, h, mul)
}

/// The three relations of the truncated multivalued example:
/// `S = {(x, x + c e_1) : x_1 = 0}`, `A` the Jacobi matrix, `T = S + A`.
#[derive(Debug, Clone)]
pub struct Example31<R: Real> {
    pub params: JacobiParams,
    pub s: LinearRelation<R>,
    pub a: LinearRelation<R>,
    pub t: LinearRelation<R>,
}

/// Residuals of the operator-part formula `T_s x = x + A x − a_1 x_2 e_1`
/// and of the naive identity `T_s = S_s + A` on `X_1`.
#[derive(Debug, Clone, Serialize)]
pub struct Example31Report {
    #[serde(rename = "N")]
    pub size: usize,
    pub a1: f64,
    /// Column-relative deviation from the closed-form operator part.
    pub residual: f64,
    /// `max_{x ∈ X_1, ‖x‖=1} ‖T_s x − S_s x − A x‖`.
    pub naive_deviation: f64,
    pub domain_is_x1: bool,
    pub mul_part_is_e1: bool,
}

impl Example31Report {
    pub fn passed(&self, residual_tol: f64) -> bool {
        self.residual <= residual_tol
            && self.naive_deviation >= self.a1.abs() * (1.0 - 1e-6)
            && self.domain_is_x1
            && self.mul_part_is_e1
    }
}

pub fn jacobi_example31<R: Real>(p: &JacobiParams, tol: &Tolerance<R>) -> Result<Example31<R>> {
    p.validate()?;
    let n = p.size;
    let x1 = x1_subspace::<R>(n);
    let e1 = Subspace::coordinate(n, &[0])?;
    let s = hermitian_block(&x1, &CMat::identity(n, n), &e1)?;
    let a = LinearRelation::operator(&p.matrix())?;
    let t = s.sum(&a, tol)?;
    Ok(Example31 {
        params: p.clone(),
        s,
        a,
        t,
    })
}

fn x1_subspace<R: Real>(n: usize) -> Subspace<R> {
    let idx: Vec<usize> = (1..n).collect();
    Subspace::coordinate(n, &idx).expect("indices in range")
}

impl<R: Real> Example31<R> {
    pub fn report(&self, tol: &Tolerance<R>) -> Result<Example31Report> {
        let n = self.params.size;
        let jac = self.params.matrix::<R>();
        let x1 = x1_subspace::<R>(n);
        let e1 = Subspace::coordinate(n, &[0])?;

        let dt = self.t.decompose(tol)?;
        let ds = self.s.decompose(tol)?;
        let a1 = self.params.a[0];

        // Closed form (I + A − a_1 e_1 e_2ᵀ) applied to the stored domain basis.
        let mut closed = CMat::<R>::identity(n, n) + &jac;
        closed[(0, 1)] -= cplx::<R>(a1, 0.0);
        let expected = dense::mul(&closed, dt.domain.basis());
        let residual = dense::relative_column_residual(&expected, &dt.op_matrix);

        let naive = dt.operator_matrix() - ds.operator_matrix() - dense::mul(&jac, &x1.projector());
        Ok(Example31Report {
            size: n,
            a1,
            residual: residual.as_f64(),
            naive_deviation: dense::spectral_norm(&naive).as_f64(),
            domain_is_x1: dt.domain.equals(&x1, tol)?,
            mul_part_is_e1: dt.mul_part.equals(&e1, tol)?,
        })
    }
}

/// A self-adjoint relation `graph(H_0 on M^⊥) ⊕ ({0} × M)`.
#[derive(Debug, Clone)]
pub struct BlockModel<R: Real> {
    pub relation: LinearRelation<R>,
    pub mul: Subspace<R>,
    /// Hermitian, maps `M^⊥` into itself and vanishes on `M`.
    pub h0: CMat<R>,
}

pub fn block_self_adjoint<R: Real>(seed: &ModelSeed) -> Result<BlockModel<R>> {
    seed.validate()?;
    let mut rng = seed.rng(stream::BLOCK);
    let mul = random_subspace::<R>(&mut rng, seed.n, seed.mul_dim);
    let perp = mul.complement();
    let h0 = random_hermitian_on(&mut rng, &perp);
    let relation = hermitian_block(&perp, &h0, &mul)?;
    Ok(BlockModel { relation, mul, h0 })
}

/// Graph of a random Hermitian matrix restricted to a random subdomain of
/// codimension `mul_dim`. Self-adjoint for `mul_dim = 0`, strictly Hermitian
/// otherwise.
pub fn random_hermitian_relation<R: Real>(seed: &ModelSeed) -> Result<LinearRelation<R>> {
    seed.validate()?;
    let mut rng = seed.rng(stream::RESTRICT);
    let h = random_hermitian::<R>(&mut rng, seed.n);
    let domain = random_subspace::<R>(&mut rng, seed.n, seed.n - seed.mul_dim);
    LinearRelation::operator_on(&domain, &h)
}

/// Random relation whose graph is a uniformly drawn `dim`-dimensional
/// subspace of `C^{2n}`.
pub fn random_relation<R: Real>(seed: u64, n: usize, dim: usize) -> Result<LinearRelation<R>> {
    if dim > 2 * n {
        return Err(Error::InvalidParams(format!(
            "graph dimension {dim} exceeds 2n = {}",
            2 * n
        )));
    }
    let mut rng = seeded_rng(seed, stream::RELATION);
    LinearRelation::from_graph(random_subspace(&mut rng, 2 * n, dim))
}

/// Which structural hypotheses a generated `(S, A)` pair is built to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleFamily {
    /// `S`, `A` Hermitian with independent multivalued parts.
    General,
    /// `S` self-adjoint, `A(0) ⊆ S(0)`.
    SelfAdjointBase,
    /// `T(0)^⊥` reduces `S` and `A`; `S` may be strictly Hermitian.
    Reducing,
    /// Reducing, with `S` self-adjoint.
    ReducingSelfAdjoint,
}

/// `T = S + A` with `D(T) = D(S) ⊆ D(A)`.
#[derive(Debug, Clone)]
pub struct Triple<R: Real> {
    pub family: TripleFamily,
    pub seed: ModelSeed,
    pub s: LinearRelation<R>,
    pub a: LinearRelation<R>,
    pub t: LinearRelation<R>,
}

/// Generates a triple whose `T(0)` has dimension `mul_dim` and whose
/// perturbation, compressed to `T(0)^⊥`, has rank `rank_r`.
pub fn perturbation_triple<R: Real>(
    seed: &ModelSeed,
    family: TripleFamily,
    tol: &Tolerance<R>,
) -> Result<Triple<R>> {
    seed.validate()?;
    let mut rng = seed.rng(stream::TRIPLE);
    let (n, m, r) = (seed.n, seed.mul_dim, seed.rank_r);
    let (s, a) = match family {
        TripleFamily::General => {
            let ms = rng.random_range(0..=m);
            let joint = random_subspace::<R>(&mut rng, n, m);
            let m_s = random_subspace_within(&mut rng, &joint, ms);
            let m_a = m_s.complement().intersect(&joint, tol)?;
            let free = joint.complement();
            let shrink = if free.dim() >= 2 {
                rng.random_range(0..=1)
            } else {
                0
            };
            let d_s = random_subspace_within(&mut rng, &free, free.dim() - shrink);
            let h_s = random_hermitian::<R>(&mut rng, n);
            let h_a = finite_rank_with(&mut rng, r, &Subspace::full(n))?;
            let s = hermitian_block(&d_s, &h_s, &m_s)?;
            let a = hermitian_block(&m_a.complement(), &h_a, &m_a)?;
            (s, a)
        }
        TripleFamily::SelfAdjointBase => {
            let mul = random_subspace::<R>(&mut rng, n, m);
            let ma = rng.random_range(0..=m);
            let m_a = random_subspace_within(&mut rng, &mul, ma);
            let h_s = random_hermitian::<R>(&mut rng, n);
            let h_a = finite_rank_with(&mut rng, r, &Subspace::full(n))?
                + random_hermitian_on(&mut rng, &mul);
            let s = hermitian_block(&mul.complement(), &h_s, &mul)?;
            let a = hermitian_block(&m_a.complement(), &h_a, &m_a)?;
            (s, a)
        }
        TripleFamily::Reducing | TripleFamily::ReducingSelfAdjoint => {
            let self_adjoint = family == TripleFamily::ReducingSelfAdjoint;
            let mul = random_subspace::<R>(&mut rng, n, m);
            let perp = mul.complement();
            let ms = if self_adjoint {
                m
            } else {
                rng.random_range(0..=m)
            };
            let m_s = random_subspace_within(&mut rng, &mul, ms);
            // M_A ⊇ M ⊖ M_S guarantees M_S + M_A = M.
            let rest = m_s.complement().intersect(&mul, tol)?;
            let k = rng.random_range(0..=ms);
            let extra = random_subspace_within(&mut rng, &m_s, k);
            let m_a = rest.sum(&extra, tol)?;
            let shrink = if !self_adjoint && perp.dim() >= 2 {
                rng.random_range(0..=1)
            } else {
                0
            };
            let d = random_subspace_within(&mut rng, &perp, perp.dim() - shrink);
            let h_s = random_hermitian_on(&mut rng, &perp);
            let h_a = finite_rank_with(&mut rng, r, &perp)? + random_hermitian_on(&mut rng, &mul);
            let s = hermitian_block(&d, &h_s, &m_s)?;
            let a = hermitian_block(&m_a.complement(), &h_a, &m_a)?;
            (s, a)
        }
    };
    let t = s.sum(&a, tol)?;
    Ok(Triple {
        family,
        seed: *seed,
        s,
        a,
        t,
    })
}

/// Deliberate hypothesis defects for self-adjointness gate instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateDefect {
    None,
    /// `S` restricted to a proper subdomain, hence only Hermitian.
    BaseNotSelfAdjoint,
    /// `A` the graph of a non-Hermitian matrix.
    PerturbationNotHermitian,
    /// `D(A)` a random hyperplane of `X`, so `D(S) ⊄ D(A)`.
    DomainNotContained,
}

impl GateDefect {
    pub const ALL: [GateDefect; 4] = [
        GateDefect::None,
        GateDefect::BaseNotSelfAdjoint,
        GateDefect::PerturbationNotHermitian,
        GateDefect::DomainNotContained,
    ];
}

/// `(S, A)` for a self-adjointness gate. Requires `mul_dim < n`.
pub fn gate_pair<R: Real>(
    seed: &ModelSeed,
    defect: GateDefect,
    tol: &Tolerance<R>,
) -> Result<(LinearRelation<R>, LinearRelation<R>)> {
    seed.validate()?;
    if seed.mul_dim >= seed.n {
        return Err(Error::InvalidParams(
            "gate instances need mul_dim < n".into(),
        ));
    }
    if defect == GateDefect::None {
        let tr = perturbation_triple(seed, TripleFamily::SelfAdjointBase, tol)?;
        return Ok((tr.s, tr.a));
    }
    let mut rng = seed.rng(stream::GATE);
    let n = seed.n;
    let base = block_self_adjoint(seed)?;
    let s = match defect {
        GateDefect::BaseNotSelfAdjoint => {
            let perp = base.mul.complement();
            let d = random_subspace_within(&mut rng, &perp, perp.dim() - 1);
            hermitian_block(&d, &base.h0, &base.mul)?
        }
        _ => base.relation,
    };
    let a = match defect {
        GateDefect::PerturbationNotHermitian => {
            let mut g = complex_gaussian::<R>(&mut rng, n, n);
            // Keep the skew part visible against the rank cutoff.
            let skew = &g - g.adjoint();
            if dense::spectral_norm(&skew) < R::lit(1e-3) {
                g[(0, n - 1)] += cplx::<R>(1.0, 0.0);
            }
            LinearRelation::operator(&g)?
        }
        GateDefect::DomainNotContained => {
            let h = random_hermitian::<R>(&mut rng, n);
            let d = random_subspace::<R>(&mut rng, n, n - 1);
            LinearRelation::operator_on(&d, &h)?
        }
        _ => LinearRelation::operator(&random_hermitian::<R>(&mut rng, n))?,
    };
    Ok((s, a))
}

/// Model description sufficient to regenerate an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescription {
    pub kind: String,
    pub seed: u64,
    pub n: usize,
    pub mul_dim: usize,
    pub rank_r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobi: Option<JacobiParams>,
}

impl ModelDescription {
    pub fn from_seed(kind: &str, seed: &ModelSeed) -> Self {
        Self {
            kind: kind.to_string(),
            seed: seed.seed,
            n: seed.n,
            mul_dim: seed.mul_dim,
            rank_r: seed.rank_r,
            jacobi: None,
        }
    }

    pub fn example31(seed: u64, params: &JacobiParams) -> Self {
        Self {
            kind: "example31".into(),
            seed,
            n: params.size,
            mul_dim: 1,
            rank_r: 0,
            jacobi: Some(params.clone()),
        }
    }

    pub fn model_seed(&self) -> Result<ModelSeed> {
        ModelSeed::new(self.seed, self.n, self.mul_dim, self.rank_r)
    }

    /// Rebuilds the relation this description names. Triples yield `T`.
    pub fn build<R: Real>(&self, tol: &Tolerance<R>) -> Result<LinearRelation<R>> {
        match self.kind.as_str() {
            "example31" => {
                let p = self.jacobi.as_ref().ok_or_else(|| {
                    Error::InvalidParams("example31 needs jacobi parameters".into())
                })?;
                Ok(jacobi_example31(p, tol)?.t)
            }
            "example31_s" => {
                let p = JacobiParams::free(self.n);
                Ok(jacobi_example31(&p, tol)?.s)
            }
            "block_self_adjoint" => Ok(block_self_adjoint(&self.model_seed()?)?.relation),
            "random_hermitian" => random_hermitian_relation(&self.model_seed()?),
            "finite_rank" => finite_rank_hermitian(&self.model_seed()?, &Subspace::full(self.n)),
            other => {
                let family = match other {
                    "triple_general" => TripleFamily::General,
                    "triple_self_adjoint_base" => TripleFamily::SelfAdjointBase,
                    "triple_reducing" => TripleFamily::Reducing,
                    "triple_reducing_self_adjoint" => TripleFamily::ReducingSelfAdjoint,
                    _ => {
                        return Err(Error::InvalidParams(format!(
                            "unknown model kind {other:?}"
                        )))
                    }
                };
                Ok(perturbation_triple(&self.model_seed()?, family, tol)?.t)
            }
        }
    }
}

/// Largest entry of `|G_fᴴ G_x − G_xᴴ G_f|`: zero exactly for Hermitian relations.
pub fn hermitian_form_defect<R: Real>(t: &LinearRelation<R>) -> R {
    let (gx, gf) = (t.x_block(), t.f_block());
    let form = gf.adjoint() * &gx - gx.adjoint() * gf;
    form.iter()
        .map(|z| z.modulus())
        .fold(R::zero(), |a, b| a.max(b))
}
