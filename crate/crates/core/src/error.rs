use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum FockError {
    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degree overflow: {0}")]
    Degree(String),

    #[error("resolution failure: {0}")]
    Resolution(String),

    #[error("duplicate or near-duplicate points: {0}")]
    Distinctness(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("i/o failure on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, FockError>;

/// Non-fatal quality warning attached to a numerical result.
#[derive(Debug, Clone, PartialEq)]
pub enum Flag {
    /// Kernel or displaced vector not held by the truncation.
    Truncation { defect: f64 },
    /// `|Im z|` beyond the phase-resolution budget of the line rule.
    Oscillation { im_z: f64, budget: f64 },
    /// Projection tail is a large fraction of the total.
    UnderResolved { tail_ratio: f64 },
    /// Two independent computational paths disagree.
    Discrepancy { value: f64, limit: f64 },
    /// Input does not satisfy a soft precondition.
    Precondition(String),
}

/// A value together with an optional quality flag.
#[derive(Debug, Clone)]
pub struct Flagged<T> {
    pub value: T,
    pub flag: Option<Flag>,
}

impl<T> Flagged<T> {
    pub fn clean(value: T) -> Self {
        Self { value, flag: None }
    }

    pub fn with(value: T, flag: Option<Flag>) -> Self {
        Self { value, flag }
    }

    pub fn is_reliable(&self) -> bool {
        self.flag.is_none()
    }

    pub fn into_inner(self) -> T {
        self.value
    }
}
