use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("k = {k} does not divide n = {n}")]
    KDoesNotDivideN { k: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field of size {p}^{degree} exceeds the table cap of {cap} elements")]
    FieldTooLarge { p: u64, degree: usize, cap: u64 },
    #[error("scalar field of order {0} is larger than the supported 256")]
    ScalarFieldTooLarge(u64),
    #[error("modulus is not a monic primitive polynomial of degree {0}")]
    InvalidModulus(usize),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a reduced row echelon basis: {0}")]
    NotRref(String),
    #[error("mixed ambient spaces: {0}")]
    MixedAmbient(String),
    #[error("enumeration of {count} elements exceeds the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
