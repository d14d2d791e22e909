use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid modulus {0}: expected an odd prime")]
    InvalidPrime(u64),

    #[error("invalid evaluation point {0}: expected an odd prime power")]
    InvalidEvaluationPoint(String),

    #[error("invalid invariant factor {0}: factors must be odd and greater than 1")]
    InvalidInvariantFactor(u64),

    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("poset too large: {0} distinct points (at most 64 supported)")]
    PosetTooLarge(usize),

    #[error("ideal {inner} is not contained in {outer}")]
    NotNested { inner: String, outer: String },

    #[error("order ideal is not small")]
    NotSmall,

    #[error("expected a connected difference I^perp - I, found {0} components")]
    NotConnected(usize),

    #[error("element does not belong to the group: {0}")]
    BadElement(String),

    #[error("sign data inconsistent within a component: {0}")]
    InconsistentSigns(String),

    #[error("orbit validation failed: {0}")]
    OrbitValidation(String),

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
