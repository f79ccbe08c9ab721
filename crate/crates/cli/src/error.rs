use serde_json::{json, Map, Value};

/// Input or processing failure, reported as a JSON object with exit code 2.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub details: Map<String, Value>,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            details: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn at_path(self, path: &std::path::Path) -> Self {
        self.with("path", json!(path.display().to_string()))
    }

    pub fn to_json(&self) -> Value {
        let mut err = Map::new();
        err.insert("kind".into(), json!(self.kind));
        err.insert("message".into(), json!(self.message));
        err.extend(self.details.clone());
        Value::Object(err)
    }
}

impl From<ethic_dual::Error> for CliError {
    fn from(e: ethic_dual::Error) -> Self {
        use ethic_dual::Error as E;
        let message = e.to_string();
        match e {
            E::DimensionMismatch(_) => Self::new("dimension_mismatch", message),
            E::NotSquare { rows, cols } => Self::new("not_square", message)
                .with("rows", json!(rows))
                .with("cols", json!(cols)),
            E::Empty(_) => Self::new("empty", message),
            E::Parse { line, .. } => Self::new("parse", message).with("line", json!(line)),
            E::InvalidGraph(_) => Self::new("invalid_graph", message),
            E::Disconnected => Self::new("disconnected", message),
            E::VertexOutOfRange { vertex, .. } => {
                Self::new("vertex_out_of_range", message).with("vertex", json!(vertex))
            }
            E::CapExceeded { what, needed, cap } => Self::new("cap_exceeded", message)
                .with("what", json!(what))
                .with("needed", json!(needed.to_string()))
                .with("cap", json!(cap.to_string())),
            E::NegativeEntry(_) => Self::new("negative_entry", message),
            E::Overflow(_) => Self::new("overflow", message),
            E::IndexOutOfRange { index, len } => Self::new("index_out_of_range", message)
                .with("index", json!(index))
                .with("len", json!(len)),
            E::ComplexTooLong(_) => Self::new("complex_too_long", message),
            E::Infeasible => Self::new("infeasible", message),
            E::RegionFeasible => Self::new("region_feasible", message),
            E::Unbounded => Self::new("unbounded", message),
            E::ComponentFailure { component, .. } => {
                Self::new("component_failure", message).with("component", json!(component))
            }
            E::Defect(_) => Self::new("internal_defect", message),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new("json", e.to_string()).with("line", json!(e.line()))
    }
}

pub type CliResult<T> = Result<T, CliError>;
