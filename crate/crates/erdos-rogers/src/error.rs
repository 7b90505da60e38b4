//! Shared error type for all library operations.

use thiserror::Error;

use crate::graph::Stage;

/// Errors returned by library operations.
///
/// Operations that can only fail in one way return that variant directly;
/// orchestration code (CLI, experiment driver) propagates whatever the
/// underlying stage produced.
#[derive(Debug, Error)]
pub enum Error {
    /// The pair (s, t) is outside the supported range.
    #[error("pair (s={s}, t={t}) out of range: need s >= 3 and s+2 <= t <= 2s-1")]
    OutOfRange { s: i64, t: i64 },

    /// A scheme was evaluated against exponents computed for a different pair.
    #[error(
        "scheme is for (s={scheme_s}, t={scheme_t}) but exponents are for (s={exp_s}, t={exp_t})"
    )]
    MismatchedParameters {
        scheme_s: u32,
        scheme_t: u32,
        exp_s: u32,
        exp_t: u32,
    },

    /// A node index outside 0..t was passed to a per-node operation.
    #[error("node {node} out of range for a scheme on {t} nodes")]
    NodeOutOfRange { node: u32, t: u32 },

    /// Enumeration was requested beyond the configured cap.
    #[error(
        "enumeration for t={t} exceeds the cap of {cap}; raise the cap explicitly if intended"
    )]
    TooLarge { t: u32, cap: u32 },

    /// A subset argument contains nodes that are not in the configuration.
    #[error("subset is not contained in the configuration's nodes: {reason}")]
    BadSubset { reason: String },

    /// Block data violates the scheme axioms.
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    /// Construction parameters violate their invariants.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A pipeline stage was fed a graph from the wrong stage.
    #[error("operation requires a stage-{expected} graph but got stage {got}")]
    WrongStage { expected: Stage, got: Stage },

    /// The final deletion pass left a t-clique standing, which means the
    /// clique list handed to it was not exhaustive.
    #[error("a {t}-clique survived the final deletion pass (witness {witness:?}); the clique list was not exhaustive")]
    IncompleteKtList { t: u32, witness: Vec<u32> },

    /// Subset size outside 1..=n.
    #[error("subset size {a} invalid for a graph on {n} vertices")]
    BadSize { a: usize, n: usize },

    /// A pair-density query needs at least two vertices.
    #[error("subset of size {len} has no vertex pairs")]
    EmptySubset { len: usize },

    /// A recorded hash does not match the recomputed one.
    #[error("hash mismatch for {what}: recorded {recorded}, recomputed {actual}")]
    HashMismatch {
        what: String,
        recorded: String,
        actual: String,
    },

    /// A file had the wrong shape or an unparseable field.
    #[error("bad file format: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
