use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported element {element}: expected a simplex with {expected} nodes, found {found}")]
    UnsupportedElement {
        element: usize,
        expected: usize,
        found: usize,
    },
    #[error("mesh topology error: {0}")]
    Topology(String),
    #[error("degenerate geometry: {0}")]
    Geometry(String),
    #[error("fracture pairing error: {0}")]
    Pairing(String),
    #[error("singular {system} local system at vertex {vertex} (pivot ratio {pivot_ratio:.3e})")]
    SingularLocalSystem {
        system: &'static str,
        vertex: usize,
        pivot_ratio: f64,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("linear solver failed: {0}")]
    LinearSolver(String),
    #[error("Newton iteration did not converge after {iterations} iterations (last update {last_update:.3e})")]
    NonConvergence {
        iterations: usize,
        last_update: f64,
        /// Last iterate, flattened in global unknown order.
        last_iterate: Vec<f64>,
    },
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } | Error::LinearSolver(_) => 2,
            Error::Io { .. } => 3,
            _ => 1,
        }
    }
}
