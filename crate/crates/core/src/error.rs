use thiserror::Error;

use crate::model::{Schedule, Violation};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown job `{0}`")]
    UnknownJob(String),
    #[error("schedule is infeasible ({} violation(s), first: {})", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    Infeasible(Vec<Violation>),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("packing condition violated: {0}")]
    ConditionViolated(String),
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("resource limit exceeded after {nodes} nodes")]
    ResourceExceeded {
        nodes: u64,
        best: Option<Box<(u64, Schedule)>>,
    },
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InternalInvariant(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::PreconditionFailed(msg.into())
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInstance(_) | Error::InvalidInput(_) | Error::UnknownJob(_) => 2,
            Error::Infeasible(_)
            | Error::PreconditionFailed(_)
            | Error::LpInfeasible
            | Error::ResourceExceeded { .. } => 3,
            Error::ConditionViolated(_) | Error::InternalInvariant(_) => 4,
        }
    }
}
