use thiserror::Error;

use crate::basis::FailureWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two elements (or an element and a group) disagree on degree or color modulus.
    #[error("dimension mismatch: expected (n={expected_n}, r={expected_r}), got (n={n}, r={r})")]
    Dimension { expected_n: usize, expected_r: u32, n: usize, r: u32 },

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid group parameters: {0}")]
    InvalidSpec(String),

    /// Group (or product space) too large for exhaustive work under the configured ceiling.
    #[error("size {size} exceeds ceiling {ceiling}")]
    TooLarge { size: String, ceiling: u64 },

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("element {0} is not in the group")]
    NotInGroup(String),

    #[error("peel decomposition is not available for basis `{0}`")]
    PeelUnsupported(String),

    #[error("exponent {k} at index {index} is out of range 0..{modulus}")]
    ExponentOutOfRange { index: usize, k: u64, modulus: u64 },

    #[error("not a basis: {0}")]
    NotABasis(FailureWitness),

    #[error("generators do not generate the group; unreached element {witness} ({unreached} unreached)")]
    Unreached { witness: String, unreached: usize },

    #[error("generator {0} lies outside the group")]
    GeneratorOutsideGroup(String),

    /// Two independent computations that must agree did not.
    #[error("internal consistency fault: {0}")]
    Inconsistent(String),
}
