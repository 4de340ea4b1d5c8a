use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order {needed} exceeds the configured maximum {max}")]
    CyclotomicOverflow { needed: u64, max: u64 },
    #[error("star operator needs r to be a multiple of the polydromy order {polydromy}, got {r}")]
    NotMultiple { r: i64, polydromy: i64 },
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("the zero polynomial has no semidegree value")]
    ZeroPolynomial,
    #[error("invalid semidegree: {0}")]
    InvalidSemidegree(String),
    #[error("polynomial is not monic in y up to a monomial factor")]
    NotMonic,
    #[error("Newton polygon edge polynomial {0} has no exact roots in a cyclotomic field")]
    UnsolvableEdge(String),
    #[error("key form verification failed: {0}")]
    KeyFormVerification(String),
    #[error("surface is not in S_pol: key form {j} of semidegree {i} is not a polynomial")]
    NotInSpol { i: usize, j: usize },
    #[error("invalid curvette family at ({i}, {j}): {reason}")]
    InvalidFamily { i: usize, j: usize, reason: String },
    #[error("semidegrees {0} and {1} coincide")]
    DuplicateSemidegree(usize, usize),
    #[error("leading coefficient has unexpected shape: {0}")]
    LcShape(String),
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("section spaces are unbounded: {0}")]
    UnboundedSections(String),
    #[error("branch violates preconditions: {0}")]
    BranchPrecondition(String),
    #[error("branches are not equisingular: {0}")]
    NotEquisingular(String),
    #[error("comparison box is infeasible: {0}")]
    BoxInfeasible(String),
    #[error("vector length {found} does not match surface size {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unreduced fraction {text:?} at {path}")]
    UnreducedFraction { path: String, text: String },
    #[error("fields {0} are mutually exclusive")]
    ExclusiveFields(String),
    #[error("unknown field {field:?} at {path}")]
    UnknownField { path: String, field: String },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::CyclotomicOverflow { .. } => "CyclotomicOverflow",
            Error::NotMultiple { .. } => "NotMultiple",
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::InvalidSemidegree(_) => "InvalidSemidegree",
            Error::NotMonic => "NotMonic",
            Error::UnsolvableEdge(_) => "UnsolvableEdge",
            Error::KeyFormVerification(_) => "KeyFormVerification",
            Error::NotInSpol { .. } => "NotInSpol",
            Error::InvalidFamily { .. } => "InvalidFamily",
            Error::DuplicateSemidegree(..) => "DuplicateSemidegree",
            Error::LcShape(_) => "LcShape",
            Error::NonIntegral(_) => "NonIntegral",
            Error::UnboundedSections(_) => "UnboundedSections",
            Error::BranchPrecondition(_) => "BranchPrecondition",
            Error::NotEquisingular(_) => "NotEquisingular",
            Error::BoxInfeasible(_) => "BoxInfeasible",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IndexOutOfRange(_) => "IndexOutOfRange",
            Error::UnreducedFraction { .. } => "UnreducedFraction",
            Error::ExclusiveFields(_) => "ExclusiveFields",
            Error::UnknownField { .. } => "UnknownField",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
