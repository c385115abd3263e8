use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("no transition family satisfies the constraints")]
    NoTransitionFamily,
    #[error("invalid label assignment: {0}")]
    LabelAssignment(String),
    #[error("S-graph condition violated: {0}")]
    Condition(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("closure exceeded {cap} vertices")]
    CapExceeded { cap: usize },
    #[error("vector is not in the kernel of the induced operator")]
    NotInKernel,
    #[error("flow identity fails at vertex {vertex}: {detail}")]
    Flow { vertex: usize, detail: String },
    #[error("partition check failed: {0}")]
    Partition(String),
    #[error("malformed document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
