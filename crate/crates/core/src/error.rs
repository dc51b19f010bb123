use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("edge ({u}, {v}) has weight {w}; weights must lie in [1, {max}]")]
    BadWeight { u: VertexId, v: VertexId, w: i64, max: u64 },
    #[error("cut side must be a nonempty proper subset of the vertex set")]
    DegenerateCut,
    #[error("vertex {0} appears in more than one block or terminal set")]
    Overlap(VertexId),
    #[error("empty vertex set where a nonempty one is required")]
    EmptySet,
    #[error("source and sink coincide ({0})")]
    SameEndpoints(VertexId),
    #[error("need at least {need} terminal sets or terminals, got {got}")]
    TooFewTerminals { need: usize, got: usize },
    #[error("source {0} is not a terminal / real node of the guide tree")]
    SourceNotInTerminals(VertexId),
    #[error("terminals are disconnected: {unreachable:?} not connected to {anchor}")]
    DisconnectedTerminals { anchor: VertexId, unreachable: Vec<VertexId> },
    #[error("parameter {name} = {value} out of range: {expected}")]
    Parameter { name: &'static str, value: String, expected: &'static str },
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("promise violated: lambda(s, {terminal}) = {value} outside [{lo}, 1.1 * {lo}]")]
    PromiseViolated { terminal: VertexId, value: u64, lo: u64 },
    #[error("malformed guide tree: {0}")]
    MalformedTree(String),
    #[error("gomory-hu construction made no progress after {0} pivots")]
    NoProgress(usize),
    #[error("tree failed validation after {retries} retries: {detail}")]
    ValidationFailed { retries: usize, detail: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
