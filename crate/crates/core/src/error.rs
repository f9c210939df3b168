use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("face dimension {k} out of range 0..={dim}")]
    FaceDimensionOutOfRange { k: usize, dim: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not contained: {0}")]
    NotContained(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("cone is not pointed: {0}")]
    NonPointedCone(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("transfer matrices violate the Kronecker identity: {0}")]
    TransferIdentity(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("divisor is not pseudo-effective: {0}")]
    NotPseudoEffective(String),

    #[error("curve {0} is not contractible")]
    NotContractible(usize),

    #[error("intersection matrix on the working support is not negative definite: {0}")]
    NotNegativeDefinite(String),

    #[error("boundary coefficient outside [0,1]: {0}")]
    BoundaryViolation(String),

    #[error("missing toric model")]
    MissingToricModel,

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("parse error: {0}")]
    Parse(String),
}
