use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("polynomial is not irreducible over Q")]
    NotIrreducible,

    #[error("matrix is singular")]
    Singular,

    /// Certified intervals overlap without a certificate of equality; retry
    /// with more working bits.
    #[error("precision failure at {bits} bits: {detail}")]
    Precision { bits: u32, detail: String },

    #[error("automorphism is not ergodic")]
    NotErgodic,

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("generators do not commute: pair ({0}, {1})")]
    NonCommuting(usize, usize),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("degenerate time tuple: {0}")]
    DegenerateTuple(String),

    #[error("obstruction at frequency {frequency:?}: {detail}")]
    Obstruction { frequency: Vec<i64>, detail: String },

    #[error("budget exceeded: {needed} partial sums > budget {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("search failed: {0}")]
    SearchFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
