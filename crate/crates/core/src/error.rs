use thiserror::Error;

use crate::tree::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },

    #[error("empty point set")]
    Empty,

    #[error("distance matrix entry ({0}, {1}) is undefined")]
    UndefinedEntry(usize, usize),

    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),

    #[error("triangle inequality violated: d({x},{y}) > d({x},{z}) + d({z},{y})")]
    TriangleViolation { x: usize, y: usize, z: usize },

    #[error("point {index} lies outside the root hypercube")]
    OutsideRootCube { index: usize },

    #[error("points cannot be separated at floating-point resolution (node depth {depth})")]
    Unresolvable { depth: usize },

    #[error("separation ratio must exceed 2, got {0}")]
    Separation(f64),

    #[error("tau must be at least 11, got {0}")]
    Tau(f64),

    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),

    #[error("node {0:?} is not a leaf")]
    NotALeaf(NodeId),

    #[error("node {node:?} has no ancestor {k} levels up")]
    NoAncestor { node: NodeId, k: usize },

    #[error("net tree failed its {property} check with {count} violation(s); first: {first}")]
    NetTreeProperty {
        property: &'static str,
        count: usize,
        first: String,
    },

    #[error("p and q must differ (both {0})")]
    SamePoint(usize),

    #[error("{found} WSPD pairs separate points {p} and {q}")]
    BrokenWspd { p: usize, q: usize, found: usize },

    #[error("WSPD pairs {first} and {second} both produce edge {{{u}, {v}}}")]
    DuplicateEdge {
        first: usize,
        second: usize,
        u: usize,
        v: usize,
    },

    #[error("WSPD pair {pair} produces a self-loop at point {point}")]
    SelfLoop { pair: usize, point: usize },

    #[error("edge {edge} has no generating WSPD pair")]
    MissingAnnotation { edge: usize },

    #[error("label {0} is out of range")]
    UnknownLabel(u32),

    #[error("at label {at}: no routing candidate toward {dest}")]
    NoCandidate { at: u32, dest: u32 },

    #[error("at label {at}: {count} descending candidates toward {dest}")]
    AmbiguousDescent { at: u32, dest: u32, count: usize },

    #[error("at label {at}: ascending candidates are not nested")]
    AmbiguousAscent { at: u32 },

    #[error("route {from} -> {to} exceeded the hop budget of {budget}")]
    HopBudget { from: u32, to: u32, budget: usize },

    #[error("graph is disconnected: vertex {unreachable} unreachable from {from}")]
    Disconnected { from: usize, unreachable: usize },

    #[error("perturbation {eps} must lie in [0, {alpha})")]
    Perturbation { eps: f64, alpha: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
