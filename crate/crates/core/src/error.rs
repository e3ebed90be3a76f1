use alloc::string::String;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible of the requested degree")]
    NotIrreducible,
    #[error("field order overflows the supported range")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree mismatch")]
    DegreeMismatch,
    #[error("code has full length, dual is trivial")]
    FullLength,
    #[error("all columns are zero")]
    AllZero,
    #[error("column profiles differ")]
    ProfileMismatch,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("no instance with the requested parameters exists")]
    Unsatisfiable,
    #[error("generation retries exhausted")]
    RetriesExhausted,
    #[error("point multiset is not projective")]
    NotProjective,
    #[error("point set is a blocking set, no admissible linear form")]
    BlockingSet,
    #[error("no linear form attached to the point set")]
    MissingL,
    #[error("gale transform is degenerate")]
    Degenerate,
    #[error("point set does not have the iso-dual profile")]
    NotIsoDualProfile,
    #[error("macaulay duality violated in degree {0}")]
    DualityViolation(usize),
    #[error("not a witness")]
    NotAWitness,
    #[error("hilbert functions differ")]
    HfMismatch,
    #[error("search cap exceeded")]
    CapExceeded,
    #[error("vector is not in the expected canonical piece")]
    NotInPiece,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = core::result::Result<T, Error>;
