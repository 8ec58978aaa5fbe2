use std::path::PathBuf;

use hydrogrid_core::analysis::AnalysisError;
use hydrogrid_core::solution::SolutionError;
use hydrogrid_core::{CaseError, FormulationError, ProfileError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: line {line}, column {column}, at `{field}`: {message}", path.display())]
    CaseSyntax {
        path: PathBuf,
        line: usize,
        column: usize,
        field: String,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Case {
        path: PathBuf,
        #[source]
        source: CaseError,
    },
    #[error("profiles: {0}")]
    Profiles(#[from] ProfileError),
    #[error("{}: line {line}: {message}", path.display())]
    ProfileCsv {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("profiles: missing {kind} value for `{key}` at quarter {quarter}, hour {hour}")]
    MissingProfileCell {
        kind: &'static str,
        key: String,
        quarter: usize,
        hour: usize,
    },
    #[error("MPS line {line}: {message}")]
    Mps { line: usize, message: String },
    #[error(transparent)]
    Formulation(#[from] FormulationError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("configuration: {0}")]
    Config(String),
    #[error("hub model cost {hub} exceeds benchmark cost {traditional}")]
    Dominance { hub: f64, traditional: f64 },
}

impl Error {
    /// Process exit code for a run that ended in this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Dominance { .. } => crate::run::EXIT_VERIFICATION,
            _ => crate::run::EXIT_CONFIG,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("solver backend not available: {0}")]
    BackendMissing(String),
    #[error("solver backend failed: {0}")]
    BackendCrash(String),
    #[error("solution file line {line}: {message}")]
    SolutionFile { line: usize, message: String },
    #[error(transparent)]
    Solution(#[from] SolutionError),
}
