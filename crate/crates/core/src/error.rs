use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The modulus does not meet the operation's requirement (usually primality).
    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus { modulus: u64, reason: String },

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A multiplier set could not be built.
    #[error("invalid multiplier set: {0}")]
    InvalidMultipliers(String),

    /// Two signed cosets chosen for a structure set overlap.
    #[error("sign conflict: coset {0} collides with an earlier coset")]
    SignConflict(usize),

    /// A search ran out of node budget before reaching a verdict.
    #[error("search inconclusive after {nodes} nodes")]
    Inconclusive { nodes: u64 },

    /// The received word has a syndrome no single admissible error explains.
    #[error("uncorrectable word: syndrome {0} has no decomposition m * s")]
    Uncorrectable(u64),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn not_prime(modulus: u64) -> Self {
        Error::InvalidModulus {
            modulus,
            reason: "not prime".into(),
        }
    }
}
