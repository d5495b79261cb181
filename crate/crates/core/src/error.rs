use thiserror::Error;

/// A term that failed to parse, with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("domain is empty")]
    EmptyDomain,
    #[error("domain is unbounded")]
    UnboundedDomain,
    #[error("domain is not full-dimensional")]
    DegenerateDomain,
    #[error("malformed domain: {0}")]
    MalformedDomain(String),
    #[error("degenerate hyperplane: all normal coefficients are zero")]
    DegenerateHyperplane,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live on different domains")]
    DomainMismatch,
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("cell forms are not continuous across hyperplane {0}")]
    Discontinuous(usize),
    #[error("empty region: {0}")]
    EmptyRegion(&'static str),
    #[error("element is not a component of the unit")]
    NotAComponent,
    #[error("element is not strictly positive")]
    NotPositive,
    #[error("morphism target does not refine the element's domain")]
    RefinementViolation,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
