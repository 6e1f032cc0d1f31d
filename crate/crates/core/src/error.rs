use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sequence is not a permutation of the positive roots")]
    NotAPermutation,
    #[error("root {0} is simple and has no decomposition")]
    NotDecomposable(String),
    #[error("bad spin {0}: 2j must be a non-negative integer")]
    BadSpin(f64),
    #[error("unsupported rank {0}")]
    UnsupportedRank(usize),
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),
    #[error("invalid normal ordering: {0}")]
    InvalidOrdering(String),
    #[error("negative argument {0} to q-integer")]
    NegativeN(i64),
    #[error("argument of q-exponential is not nilpotent")]
    NotNilpotent,
    #[error("q-exponential base {0} is degenerate")]
    DegenerateBase(f64),
    #[error("inconsistent a_alpha ratio for root {0}")]
    InconsistentRatio(String),
    #[error("all denominators small for root {0}")]
    AllDenominatorsSmall(String),
    #[error("resonant parameter: b_I = b_J for I={row}, J={col}")]
    ResonantParameter { row: usize, col: usize },
    #[error("product did not converge: tail {tail:e} after {terms} factors")]
    NotConverged { terms: usize, tail: f64 },
    #[error("singular matrix in {0}")]
    Singular(&'static str),
}

impl Error {
    /// Short tag used in reports and CLI messages.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownAlgebra(_) => "UnknownAlgebra",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotAPermutation => "NotAPermutation",
            Error::NotDecomposable(_) => "NotDecomposable",
            Error::BadSpin(_) => "BadSpin",
            Error::UnsupportedRank(_) => "UnsupportedRank",
            Error::AlgebraMismatch(..) => "AlgebraMismatch",
            Error::InvalidOrdering(_) => "InvalidOrdering",
            Error::NegativeN(_) => "NegativeN",
            Error::NotNilpotent => "NotNilpotent",
            Error::DegenerateBase(_) => "DegenerateBase",
            Error::InconsistentRatio(_) => "InconsistentRatio",
            Error::AllDenominatorsSmall(_) => "AllDenominatorsSmall",
            Error::ResonantParameter { .. } => "ResonantParameter",
            Error::NotConverged { .. } => "NotConverged",
            Error::Singular(_) => "Singular",
        }
    }

    /// Errors raised while evaluating at a valid input (as opposed to bad input).
    pub fn is_evaluation(&self) -> bool {
        matches!(
            self,
            Error::ResonantParameter { .. } | Error::NotConverged { .. } | Error::Singular(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
