use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fails its documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A query point lies outside the lattice bounding box.
    #[error("point ({0}, {1}) outside the lattice bounding box")]
    OutsideLattice(f64, f64),

    /// A coefficient field violated its declared ellipticity bounds.
    #[error("coefficient field rejected: {0}")]
    FieldRejected(String),

    /// The assembled linear system could not be factorized.
    #[error("singular or ill-conditioned system: {0}")]
    SingularSystem(String),

    /// The direct solve finished but the residual is not trustworthy.
    #[error("solver residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    ResidualTooLarge { residual: f64, threshold: f64 },

    /// An experiment input does not satisfy the hypotheses it claims.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A run configuration was rejected (not failed) by an experiment.
    #[error("configuration rejected: {0}")]
    ConfigRejected(String),

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
