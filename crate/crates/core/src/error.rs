use thiserror::Error;

/// Errors raised by construction, isolation and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q must satisfy 0 < q < 1, got {0}")]
    InvalidQ(String),

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(String),

    #[error("lower parameter b_{index} = {value} is forbidden: (b;q)_k vanishes for some k <= {n}")]
    ConstraintViolation { index: usize, value: String, n: usize },

    #[error("parameter a = {value} equals q^-{m} with 1 <= {m} <= n; use normalized_little_q_jacobi instead")]
    DegenerateParameter { value: String, m: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parameters outside the required regime: {0}")]
    Regime(String),

    #[error("the zero polynomial has no well-defined zero set")]
    ZeroPolynomial,

    #[error("root refinement exceeded its budget of {0} bisections")]
    RefinementBudget(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("logarithmic mesh needs degree >= 2, got {0}")]
    UndefinedLmesh(usize),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("malformed rational `{0}` (expected p/q)")]
    MalformedRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
