use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("a digraph needs at least one vertex")]
    EmptyDigraph,

    #[error("{what}: order {n} exceeds the configured cap {cap}")]
    SizeLimitExceeded {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("digraph is not strongly connected; decompose it first")]
    NotStronglyConnected,

    #[error("power iteration did not reach the requested tolerance after {iterations} iterations (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("polynomial has no real root at or above zero")]
    NoRealRootAtOrAboveZero,

    #[error("invalid family parameters: {0}")]
    InvalidFamilyParameters(String),

    #[error("spectra computed at tolerance {computed:e} cannot be compared at {requested:e}")]
    IncomparableTolerances { computed: f64, requested: f64 },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("parse error: {0}")]
    Parse(String),
}
