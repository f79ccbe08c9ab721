use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("enumeration cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("entries must be nonnegative: {0}")]
    NegativeEntry(&'static str),

    #[error("value does not fit in a machine integer: {0}")]
    Overflow(BigInt),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("complex of length {0} rejected: only two-term complexes are supported")]
    ComplexTooLong(usize),

    #[error("feasible region is empty")]
    Infeasible,

    #[error("region is feasible, no Farkas certificate exists")]
    RegionFeasible,

    #[error("dual infeasible: primal problem is unbounded")]
    Unbounded,

    #[error("certificate failure in {component} component: {reason}")]
    ComponentFailure {
        component: &'static str,
        reason: String,
    },

    #[error("internal defect: {0}")]
    Defect(String),
}
