use thiserror::Error;

/// Errors raised by the `surfq` library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator index {index} out of range 1..={max}")]
    GeneratorOutOfRange { index: u32, max: u32 },
    #[error("context mismatch: genus {left} vs genus {right}")]
    ContextMismatch { left: u32, right: u32 },
    #[error("element is not in the commutator subgroup (nonzero abelianisation)")]
    NotInCommutatorSubgroup,
    #[error("endomorphism does not preserve the surface relator")]
    NotWellDefined,
    #[error("unknown or out-of-range twist `{0}`")]
    InvalidTwist(String),
    #[error("invalid quotient exponent {exponent} for genus {genus}")]
    InvalidExponent { genus: u32, exponent: u32 },
    #[error("quotient of order {order} exceeds enumeration guard {guard}")]
    GuardExceeded { order: String, guard: u64 },
    #[error("elimination search failed: {0}")]
    SearchFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
