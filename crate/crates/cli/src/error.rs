use std::io;
use std::path::PathBuf;

use graph_barcode::constructions::ConstructionError;
use graph_barcode::persistence::PersistenceError;
use graph_barcode::transform::TransformError;
use graph_barcode::GraphError;

/// Failures grouped by exit code: domain errors exit with 1, I/O and
/// parse errors with 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } | CliError::Parse(_) => 2,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Parse { .. } | GraphError::BadPoint(_) => CliError::Parse(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::Io(source) => CliError::Io {
                path: PathBuf::new(),
                source,
            },
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Graph(g) => (*g).into(),
            ConstructionError::Transform(t) => t.into(),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<PersistenceError> for CliError {
    fn from(e: PersistenceError) -> Self {
        CliError::Domain(e.to_string())
    }
}
