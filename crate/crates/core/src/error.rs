use alloc::string::String;

use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input is malformed or violates a mathematical precondition.
    Validation,
    /// A configured size or iteration cap was hit.
    Resource,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("enumeration needs {needed} elements but the budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
    #[error("operation unsupported in characteristic {0}")]
    UnsupportedCharacteristic(u64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("automorphism violation: {0}")]
    AutomorphismViolation(String),
    #[error("permutation does not commute with Frobenius at point {0}")]
    CommutationViolation(usize),
    #[error("automorphism action is not free: point {point} has period {period} < {order}")]
    NotFree {
        point: usize,
        period: u64,
        order: u64,
    },
    #[error("not a free Z/{n}-set: cycle through {point} has length {len}")]
    NotFreeZnSet { n: u64, point: usize, len: u64 },
    #[error("census is not of projective-line scaling shape: {0}")]
    NotScalingShape(String),
    #[error("non-integral value at index {0}")]
    NonIntegral(usize),
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("invalid assembler: {0}")]
    InvalidAssembler(String),
    #[error("objects do not form a sieve: {0}")]
    NotASieve(String),
    #[error("cap `{cap}` exceeded (limit {limit})")]
    CapExceeded { cap: &'static str, limit: usize },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::BudgetExceeded { .. } | Error::Overflow(_) | Error::CapExceeded { .. } => {
                ErrorClass::Resource
            }
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
