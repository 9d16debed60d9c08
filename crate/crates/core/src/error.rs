use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,
    #[error("coefficient of w^{index} is nonzero; cannot divide by w^{power}")]
    NonzeroLowCoefficient { index: usize, power: usize },
    #[error("coefficient index {index} exceeds truncation order {order}")]
    IndexOutOfOrder { index: usize, order: usize },
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("degenerate sites: {0}")]
    DegenerateSites(String),
    #[error("invalid sites: {0}")]
    InvalidSites(String),
    #[error("geometric base at w=0 is {0}, not strictly inside (-1, 1)")]
    ContractionViolated(String),
    #[error("path {path} exceeded the step cap of {cap}")]
    BudgetExceeded { path: u64, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
