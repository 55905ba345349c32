use crate::coeff::CoefficientSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient {value} at index {index} is not in {set}")]
    CoefficientOutOfSet { index: usize, value: i64, set: CoefficientSet },
    #[error("input {value} at index {index} exceeds the overflow bound {bound}")]
    InputTooLarge { index: usize, value: i64, bound: i64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("search space of {size:.3e} exceeds the guard {guard:.3e}")]
    GuardExceeded { size: f64, guard: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sum list is not sorted")]
    Unsorted,
    #[error("could not plant a solution after {0} retries")]
    InfeasiblePlant(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
