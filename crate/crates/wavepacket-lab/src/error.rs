use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("unsupported harmonic index: {0}")]
    Unsupported(String),
    #[error("profile support violation: {0}")]
    Support(String),
    #[error("epsilon {eps} below the resolvable floor {floor} for L_max = {l_max}")]
    EpsFloor { eps: f64, floor: f64, l_max: usize },
    #[error("truncation above tolerance: {0}")]
    Truncation(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("missing prerequisite: {0}")]
    MissingPrerequisite(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Io(e.to_string())
    }
}
