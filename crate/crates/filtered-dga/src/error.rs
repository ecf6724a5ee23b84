use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgaError {
    #[error("linear algebra error: {0}")]
    Linear(#[from] ring_linear::LinearError),
    #[error("windows are incompatible: ({0}, len {1}) vs ({2}, len {3})")]
    IncompatibleWindows(u32, u32, u32, u32),
    #[error("degree mismatch: {context}")]
    DegreeMismatch { context: String },
    #[error("bracket undefined: product {which} is nonzero in homology (class {class:?})")]
    BracketUndefined { which: String, class: Vec<u32> },
    #[error("composition premise failed: {which} does not bound in the constrained window")]
    CompositionPremise { which: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("generator bounds exceeded: {0}")]
    Bounds(String),
    #[error("unknown generator name `{0}`")]
    UnknownGenerator(String),
    #[error("invalid DGA description: {0}")]
    BadDescription(String),
    #[error("random generation failed to produce a valid instance after {0} attempts")]
    GenerationFailed(u32),
}
