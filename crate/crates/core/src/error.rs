use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} exceeds the configured cap of {cap}")]
    DimensionTooLarge { n: usize, cap: usize },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("diagonal entry mu+{row} = {value:e} is below the pivot floor")]
    SingularDiagonal { row: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hypotheses violated: {}", .0.join("; "))]
    HypothesisViolated(Vec<String>),

    #[error("invalid matrix spec: {0}")]
    InvalidSpec(String),

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
