//! Linear relations (multivalued linear operators) on `C^n`.
//!
//! A relation is a subspace of `C^n × C^n` stored by an orthonormal basis of
//! its graph. On top of that representation the crate provides adjoints, the
//! split into operator part and multivalued part, relation sums, resolvents
//! and spectra, verifiers for perturbation identities of `T = S + A`, and
//! truncation sweeps of Jacobi relations.
//!
//! All numerics are generic over the real scalar `R` (`f32` or `f64`); the
//! aliases below fix it.

mod dense;
pub mod error;
pub mod io;
pub mod models;
pub mod perturbation;
pub mod relation;
pub mod scalar;
pub mod spectral;
pub mod subspace;
pub mod sweep;
pub mod tolerance;

pub use error::{Error, Result};
pub use perturbation::{TheoremId, Verdict};
pub use relation::{Classification, Decomposition, LinearRelation, Transform};
pub use scalar::{CMat, Real, C};
pub use spectral::SpectrumReport;
pub use subspace::{Comparison, Subspace};
pub use tolerance::Tolerance;

pub type Subspace64 = Subspace<f64>;
pub type Subspace32 = Subspace<f32>;
pub type Relation64 = LinearRelation<f64>;
pub type Relation32 = LinearRelation<f32>;
pub type Tolerance64 = Tolerance<f64>;
pub type Tolerance32 = Tolerance<f32>;
