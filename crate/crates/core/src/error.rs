use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
/// Vertex and step indices are stored 0-based and displayed 1-based.
pub enum Error {
    #[error("no crystallographic diagram of type {family}{rank}")]
    Classification { family: char, rank: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram is not crystallographic; root and Weyl group operations are unavailable")]
    NotCrystallographic,

    #[error("root closure exceeded {cap} roots; the diagram is not of finite type")]
    NotFiniteType { cap: usize },

    #[error("Weyl group has more than {cap} elements")]
    OracleTooLarge { cap: usize },

    #[error("reachable graph exceeded {cap} configurations")]
    GraphTooLarge { cap: usize },

    #[error("vertex {} out of range for a diagram with {n} vertices", .vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("illegal move at step {}: vertex {} is {state}", .step + 1, .vertex + 1)]
    IllegalMove {
        step: usize,
        vertex: usize,
        state: crate::game::VertexState,
    },

    #[error("invalid game spec: {0}")]
    InvalidSpec(String),

    #[error("{0}")]
    Domain(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}
