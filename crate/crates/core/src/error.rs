use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid q-vector: {0}")]
    InvalidQVector(String),

    #[error("invalid r-vector: {0}")]
    InvalidRVector(String),

    #[error("q = ({0}) is not reflexive")]
    NotReflexive(String),

    #[error("oracle too large: {0}")]
    OracleTooLarge(String),

    #[error("Payne parameters violate r >= 0, s >= 3, k >= r + 2: s={s}, k={k}, r={r}")]
    PayneConstraint { s: u64, k: u64, r: u64 },

    #[error("support system has no rational solution")]
    NoSolution,

    #[error("gcd of the r-vector is {0}, expected 1")]
    GcdNotOne(u64),

    #[error("invalid search spec: {0}")]
    InvalidSearchSpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code used in JSON error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidQVector(_) => "invalid_qvector",
            Error::InvalidRVector(_) => "invalid_rvector",
            Error::NotReflexive(_) => "not_reflexive",
            Error::OracleTooLarge(_) => "oracle_too_large",
            Error::PayneConstraint { .. } => "payne_constraint",
            Error::NoSolution => "no_solution",
            Error::GcdNotOne(_) => "gcd_not_one",
            Error::InvalidSearchSpec(_) => "invalid_search_spec",
            Error::Parse(_) => "parse_error",
            Error::Inconsistency(_) => "inconsistency",
            Error::Io(_) => "io_error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
