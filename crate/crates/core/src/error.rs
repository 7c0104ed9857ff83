use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("one-body dimension must be at least 1")]
    ZeroModes,
    #[error("symmetric-space dimension overflows for d={modes}, N={particles}")]
    DimensionOverflow { modes: usize, particles: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("annihilation operator applied to the vacuum sector")]
    VacuumAnnihilation,
    #[error("size guard exceeded for {what}: {size} > {limit}")]
    SizeGuard {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("order {k} exceeds particle number {particles}")]
    OrderTooLarge { k: usize, particles: usize },
    #[error("vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("vectors are colinear")]
    Colinear,
    #[error("rank {rank} outside 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    #[error("evaluator returned a non-finite value")]
    NonFinite,
    #[error("evaluator is inconsistent with a Hermitian k-body operator (residual {0:e})")]
    InconsistentEvaluator(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
