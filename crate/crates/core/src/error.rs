use thiserror::Error;

use crate::solver::SolveReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("element index {index} out of range (mesh has {n_elems} elements)")]
    ElementOutOfRange { index: usize, n_elems: usize },
    #[error("field layout does not match the space: expected {expected} values, got {got}")]
    LayoutMismatch { expected: usize, got: usize },
    #[error("singular linear system (zero pivot in column {column})")]
    SingularLinearSystem { column: usize },
    #[error("Newton iteration did not converge after {} iterations (residual {:.3e})", .report.iterations, .report.final_residual_norm)]
    NonConvergence { report: SolveReport },
    #[error("time step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("benchmark run with N = {n_elems} failed: {source}")]
    BenchmarkRunFailed {
        n_elems: usize,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the innermost cause is a Newton non-convergence.
    pub fn is_non_convergence(&self) -> bool {
        match self {
            Self::NonConvergence { .. } => true,
            Self::StepFailed { source, .. } | Self::BenchmarkRunFailed { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
