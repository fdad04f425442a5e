use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("kernel computations need an exact field, got complex floats")]
    InexactField,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("scalar field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("subspace not stable: image of basis vector {0} lies outside the span")]
    NotStable(usize),
    #[error("vector is not in the expected space: {0}")]
    NotInSpace(String),
    #[error("eigenvalue data gives an empty intersection")]
    EmptyIntersection,
    #[error("eigenspace has dimension {0}; supply more primes")]
    NotOneDimensional(usize),
    #[error("no universal Hecke element for n = {n} with entries bounded by {bound}; retry with a larger bound")]
    Infeasible { n: i64, bound: i64 },
    #[error("normalizing coordinate is zero")]
    ZeroNormalization,
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
