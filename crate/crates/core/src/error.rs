use thiserror::Error;

use crate::diagram::Propagator;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("propagator {0} is not in the diagram")]
    UnknownPropagator(Propagator),

    #[error("vertex {vertex} is outside [1..{n}]")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("diagram is not admissible: {0}")]
    NotAdmissible(String),

    #[error("diagram is not weakly admissible: {0}")]
    NotWeaklyAdmissible(String),

    #[error("vertex {0} supports a propagator")]
    SupportingVertex(usize),

    #[error("propagator {prop} is not supported on vertex {vertex}")]
    NotSupported { prop: Propagator, vertex: usize },

    #[error("necklace walk from vertex {start} left {remaining} propagator(s) unassigned")]
    WalkDidNotTerminate { start: usize, remaining: usize },

    #[error("necklace terms have inconsistent sizes")]
    RaggedNecklace,

    #[error("necklace condition fails between I_{index} and its successor")]
    NotANecklace { index: usize },

    #[error("plus at ({row}, {col}) lies outside the Le shape")]
    CellOutsideShape { row: usize, col: usize },

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid propagator order: {0}")]
    InvalidOrder(String),

    #[error("row {0} is out of range")]
    RowOutOfRange(usize),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("propagator indices {0} do not form a cyclic interval")]
    NotAnInterval(String),
}
