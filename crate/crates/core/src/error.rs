//! A single error type shared by every module of the crate.

/// Everything that can go wrong when constructing fields, point sets, or
/// running one of the exhaustive oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A characteristic that is not a prime number.
    #[error("not prime: {0}")]
    NotPrime(u64),
    /// p^k does not fit the supported range (or exceeds the configured cap).
    #[error("field too large: p={p}, k={k} exceeds cap {cap}")]
    FieldTooLarge { p: u64, k: usize, cap: u64 },
    /// An element whose coefficient vector does not match the field it is
    /// used with (wrong length or a coefficient outside 0..p).
    #[error("mismatched field: {0}")]
    MismatchedField(String),
    /// A requested multiplicative order that does not divide q - 1.
    #[error("order does not divide q-1: T={t}, q={q}")]
    OrderDoesNotDivide { t: u64, q: u64 },
    /// A basis whose trace Gram matrix is singular.
    #[error("degenerate basis")]
    DegenerateBasis,
    /// An exhaustive enumeration larger than the configured budget.
    #[error("oracle too large: {candidates} candidates exceed budget {budget}")]
    OracleTooLarge { candidates: u128, budget: u64 },
    /// A corner enumeration larger than the configured budget.
    #[error("budget exceeded: {needed} corners exceed budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    /// Any other invalid argument; the message names the offending input.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn mismatched(msg: impl Into<String>) -> Self {
        Error::MismatchedField(msg.into())
    }
}
