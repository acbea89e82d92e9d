use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("malformed integer {0:?}")]
    MalformedInteger(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("polytope has free directions and cannot be enumerated")]
    Unbounded,

    #[error("weight is not dominant integral")]
    NotDominantIntegral,

    #[error("chi + rho + delta does not lie in V^a(1, d)")]
    NotInPolytope,

    #[error("no level e accepts the weight")]
    NoLevel,

    #[error("levels {0:?} all accept the weight")]
    MultipleLevels(Vec<usize>),

    #[error("no type decomposition exists for the weight")]
    NoDecomposition,

    #[error("{0} type decompositions exist for the weight")]
    MultipleDecompositions(usize),

    #[error("mu = {mu} is not generic for d = {d}: 2*mu*l is an integer for some 1 <= l <= d")]
    NonGenericMu { mu: String, d: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("simplex iteration limit exceeded")]
    IterationLimit,
}

impl Error {
    /// Stable machine-readable identifier used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::Parse(ParseError::MalformedRational(_)) => "malformed-rational",
            Error::Parse(ParseError::MalformedInteger(_)) => "malformed-integer",
            Error::Parse(ParseError::Malformed(_)) => "malformed-input",
            Error::Unbounded => "unbounded-polytope",
            Error::NotDominantIntegral => "not-dominant-integral",
            Error::NotInPolytope => "not-in-polytope",
            Error::NoLevel => "no-level",
            Error::MultipleLevels(_) => "multiple-levels",
            Error::NoDecomposition => "no-decomposition",
            Error::MultipleDecompositions(_) => "multiple-decompositions",
            Error::NonGenericMu { .. } => "non-generic-mu",
            Error::ShapeMismatch(_) => "shape-mismatch",
            Error::IterationLimit => "iteration-limit",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
