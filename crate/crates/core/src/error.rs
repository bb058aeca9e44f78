use thiserror::Error;

use crate::set::ElementId;

/// Errors raised by oracles, instance handling and the algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is outside the ground set of size {ground_size}")]
    InstanceMismatch { element: ElementId, ground_size: usize },

    #[error("invalid matroid spec: {field}: {reason}")]
    InvalidSpec { field: String, reason: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("layer state corrupted: {0}")]
    StateCorruption(String),

    #[error("algorithm bug: {0}")]
    AlgorithmBug(String),

    #[error("could not extract an augmenting set: {0}")]
    ExtractionFailure(String),

    #[error("stream protocol error: {0}")]
    Protocol(String),

    #[error("streaming model violation: query touched element {element} which is neither retained nor current")]
    StreamingViolation { element: ElementId },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}
