use thiserror::Error;

/// Errors for every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("modulus {0} too large: must be below 2^31")]
    ModulusTooLarge(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(u64, u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not a primitive root of {1}")]
    NotPrimitiveRoot(u64, u64),

    #[error("invalid multinacci order {0}: must be in [2, 64]")]
    InvalidOrder(u64),
    #[error("invalid index range: lo {lo} > hi {hi}")]
    InvalidRange { lo: i64, hi: i64 },
    #[error("exact term at index {0} overflows signed 64-bit; pass a modulus")]
    Overflow(i64),

    #[error("matrix dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("matrix not invertible modulo {0}: determinant {1} is not a unit")]
    MatrixNotInvertible(u64, u64),

    #[error("exponent {0} out of range: need 1 < value < {1}")]
    ExponentOutOfRange(u64, u64),
    #[error("derived order {0} is degenerate (below 2); choose another ephemeral exponent")]
    LambdaDegenerate(u64),
    #[error("derived order {0} exceeds the cap {1}; choose another ephemeral exponent")]
    LambdaTooLarge(u64, u64),

    #[error("character {0:?} at position {1} is not in the alphabet")]
    UnmappedCharacter(char, usize),
    #[error("residue {0} out of range for alphabet of size {1}")]
    ValueOutOfRange(u64, usize),
    #[error("alphabet contains duplicate symbol {0:?}")]
    DuplicateSymbol(char),
    #[error("alphabet size {0} exceeds modulus {1}")]
    AlphabetTooLarge(usize, u64),
    #[error("shift vector length {0} does not match key order {1}")]
    ShiftLengthMismatch(usize, usize),
    #[error("malformed envelope: {0}")]
    MalformedEnvelope(String),

    #[error("need at least {need} plaintext/ciphertext pairs, got {got}")]
    InsufficientPairs { need: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
