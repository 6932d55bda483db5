use thiserror::Error;

use crate::model::VertexId;

/// Problems with a geometric model or instance payload. Every variant names
/// the offending entry so callers can point at the right input line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("interval of vertex {vertex} is empty or reversed: ({l}, {r})")]
    ReversedInterval { vertex: VertexId, l: i64, r: i64 },
    #[error("vertex {vertex} reuses endpoint {coord} already used by vertex {other}")]
    DuplicateEndpoint { vertex: VertexId, other: VertexId, coord: i64 },
    #[error("pi position {position} holds {value}, outside 1..={n}")]
    PermValueOutOfRange { position: usize, value: usize, n: usize },
    #[error("pi is not a bijection: value {value} appears at positions {first} and {second}")]
    PermNotBijective { value: usize, first: usize, second: usize },
    #[error("arc of vertex {vertex} uses point {point}, outside 1..={max}")]
    ArcPointOutOfRange { vertex: VertexId, point: usize, max: usize },
    #[error("edge ({u}, {v}) names a vertex outside 1..={n}")]
    EdgeOutOfRange { u: VertexId, v: VertexId, n: usize },
    #[error("edge ({v}, {v}) is a self-loop")]
    SelfLoop { v: VertexId },
    #[error("edge ({u}, {v}) is listed twice")]
    DuplicateEdge { u: VertexId, v: VertexId },
    #[error("partA vertex {v} is invalid (out of range or repeated)")]
    BadPartition { v: VertexId },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("S vertex {v} is outside 1..={n}")]
    SOutOfRange { v: VertexId, n: usize },
    #[error("S vertex {v} is listed twice")]
    DuplicateS { v: VertexId },
    #[error("weights overflow: {n} vertices with maximum weight {max} exceed the 63-bit budget")]
    WeightOverflow { n: usize, max: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the {solver} solver cannot handle a {kind} model")]
    WrongModel { solver: &'static str, kind: &'static str },
    #[error("graph is not co-bipartite: {0}")]
    NotCoBipartite(String),
    #[error("oracle refuses n = {n}; the exhaustive scan is limited to n <= {max}")]
    OracleTooLarge { n: usize, max: usize },
    #[error("instance too large for this solver: {0}")]
    TooLarge(String),
    #[error("internal solver error: {0}")]
    Internal(String),
}
