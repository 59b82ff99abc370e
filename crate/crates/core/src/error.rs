use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator part is not single-valued at tolerance: {0}")]
    Ambiguity(String),
    #[error("target subspace is not contained in the source subspace")]
    ContainmentViolation,
    #[error("relation is not self-adjoint")]
    NotSelfAdjoint,
    #[error("lambda = {re} + {im}i lies in the spectrum")]
    LambdaInSpectrum { re: f64, im: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("requested rank {rank} exceeds available dimension {available}")]
    RankTooLarge { rank: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
