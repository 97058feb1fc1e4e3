//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid degree {0}; must be >= 1")]
    InvalidDegree(usize),

    #[error("cardinality {got} exceeds enumeration bound {bound}")]
    BoundExceeded { got: u128, bound: u128 },

    #[error("modulus is not irreducible over F_{p}")]
    Reducible { p: u64 },

    #[error("elements belong to different parents")]
    ParentMismatch,

    #[error("{0} is not a subfield/subring in this tower")]
    NotSubfield(String),

    #[error("element is not invertible")]
    NotAUnit,

    #[error("element does not lie in the subring image")]
    NotInSubring,

    #[error("projection target {r} out of range 1..={n}")]
    BadProjection { r: usize, n: usize },

    #[error("{m_sub} does not divide {m}")]
    BadEmbedding { m_sub: u64, m: u64 },

    #[error("{a} is not coprime to {m}")]
    NotCoprime { a: i64, m: u64 },

    #[error("characters live over different rings")]
    RingMismatch,

    #[error("operation requires {0}")]
    Unsupported(String),

    #[error("gamma factor pole at non-positive argument {0}")]
    GammaPole(i64),

    #[error("degree identity violated: sum a_j [F_j:F] = {got}, expected {expected}")]
    DegreeMismatch { got: i64, expected: i64 },

    #[error("inconsistent induction record: {0}")]
    BadRecord(String),

    #[error("config error: {0}")]
    Config(String),
}
