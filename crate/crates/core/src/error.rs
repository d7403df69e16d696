use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("slope expression: {message} (at `{token}`, offset {offset})")]
    Parse {
        message: String,
        token: String,
        offset: usize,
    },

    #[error("invalid slope: {0}")]
    InvalidSlope(String),

    #[error("slope is rational: {0}")]
    RationalInput(String),

    #[error("continued fraction ran out of partial quotients before index {index}")]
    CoefficientsExhausted { index: usize },

    #[error("refinement budget of {budget} rounds exceeded")]
    RefinementBudgetExceeded { budget: usize },

    #[error("scanned {scanned} window positions without finding {wanted} factors")]
    SafetyCapExceeded { scanned: usize, wanted: usize },

    #[error("recurrence produced a non-bijective sequence at n = {n}")]
    RecurrenceMismatch { n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("matrix is not of the form M_sigma: {0}")]
    NotInImage(String),

    #[error("intertwiner parameters are singular: (n*a + b) * b^(n-1) = 0")]
    SingularParameters,

    #[error("witness {witness} gives equal fractional parts for {i} and {j}")]
    WitnessCollision { witness: String, i: usize, j: usize },
}

impl Error {
    /// Stable machine-readable code, used by the CLI error envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse_error",
            Error::InvalidSlope(_) => "invalid_slope",
            Error::RationalInput(_) => "rational_input",
            Error::CoefficientsExhausted { .. } => "coefficients_exhausted",
            Error::RefinementBudgetExceeded { .. } => "refinement_budget_exceeded",
            Error::SafetyCapExceeded { .. } => "safety_cap_exceeded",
            Error::RecurrenceMismatch { .. } => "recurrence_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidPermutation(_) => "invalid_permutation",
            Error::InternalInvariantViolation(_) => "internal_invariant_violation",
            Error::NotInImage(_) => "not_in_image",
            Error::SingularParameters => "singular_parameters",
            Error::WitnessCollision { .. } => "witness_collision",
        }
    }
}
