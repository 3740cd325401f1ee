use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("coefficient {0} is not invertible in the coefficient field")]
    NotInvertible(String),

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("dimension cap exceeded: {needed} > {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("window too short: {0}")]
    WindowTooShort(String),

    #[error("truncation insufficient: {0}")]
    TruncationInsufficient(String),

    #[error("ideal is not monomial: {0}")]
    NotMonomial(String),

    #[error("input is not weighted-homogeneous: {0}")]
    NotGraded(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ring mismatch between operands")]
    RingMismatch,

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("map is not well defined: {0}")]
    NotWellDefined(String),

    #[error("invalid matrix factorization: {0}")]
    InvalidFactorization(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
}
