use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field order {p}^{n} exceeds the supported bound {bound}")]
    FieldTooLarge { p: u64, n: u32, bound: u64 },

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("exponent {d} is not coprime to {modulus}")]
    NotCoprime { d: i64, modulus: u64 },

    #[error("0 raised to non-positive power {0}")]
    ZeroPower(i64),

    #[error("element {0} is outside the field")]
    InvalidElement(u32),

    #[error("cyclotomic characteristic mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("group algebra elements come from different fields")]
    FieldMismatch,

    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },

    #[error("{0} is not an extension of the given subfield")]
    NotSubfield(String),

    #[error("cannot decompose zero")]
    ZeroDecompose,

    #[error("inexact division: {0}")]
    InexactDivision(String),

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("spectrum precondition failed: {0}")]
    Precondition(String),

    /// A statement that should hold for every field was contradicted.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
