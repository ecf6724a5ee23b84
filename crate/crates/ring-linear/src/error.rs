use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("modulus {p}^{k} is invalid: {reason}")]
    BadModulus { p: u32, k: u32, reason: String },
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(String, String),
    #[error("vector is not in the row span")]
    NotInSpan,
    #[error("rows of B are not contained in the span of Z")]
    NotASubgroup,
}
