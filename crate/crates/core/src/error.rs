use thiserror::Error;

/// Errors produced by the fan, chain, amalgamation and Ramsey routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} is outside the target fan ({size} vertices)")]
    VertexOutOfRange { vertex: usize, size: usize },

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("not an epimorphism: {0}")]
    NotEpimorphism(String),

    #[error("not a chain of downward closed sets: {0}")]
    NotChain(String),

    #[error("{what} has {size} elements, above the configured cap of {cap}")]
    CapExceeded { what: String, size: usize, cap: usize },

    #[error("partial semigroup: supports of the summands overlap at coordinate {0}")]
    OverlappingSupport(usize),

    #[error("no witness: {0}")]
    NoWitness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("ill-defined induced colouring: {0}")]
    IllDefined(String),

    #[error("search budget exhausted after {spent} steps")]
    BudgetExhausted { spent: u64 },

    #[error("internal construction failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
