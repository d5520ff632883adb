use thiserror::Error;

/// Errors raised by the arithmetic, engines and reconstruction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("defining polynomial is reducible mod {p}; factor (ascending coefficients) {witness:?}")]
    Reducible { p: u64, witness: Vec<u64> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element is not a unit: it reduces to 0 mod {p}")]
    NotUnit { p: u64 },

    #[error("p-adic division is not exact: p^{valuation} does not divide the numerator")]
    InexactDivision { valuation: u32 },

    #[error("p = {p} divides the degree d = {d}; replace F by x0*F")]
    PrimeDividesDegree { p: u64, d: usize },

    #[error("enumeration needs {needed} tuples, above the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("too many {what}: {count} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable tag, used by the CLI error object.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::Reducible { .. } => "reducible",
            Error::InvalidInput(_) => "invalid_input",
            Error::NotUnit { .. } => "not_unit",
            Error::InexactDivision { .. } => "inexact_division",
            Error::PrimeDividesDegree { .. } => "prime_divides_degree",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Reconstruction(_) => "reconstruction",
            Error::Singular(_) => "singular",
            Error::TooLarge { .. } => "too_large",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
