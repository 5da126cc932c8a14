//! Crate-wide error type.

/// Errors surfaced by solvers, geometry helpers and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    /// A stored curvature pair has s'y_bar <= 0; the damping construction makes
    /// this impossible, so reaching it means the memory was corrupted.
    #[error("curvature memory breach: stored s'y_bar <= 0")]
    CurvatureBreach,

    #[error("empty output window: lambda window leaves no iterate to draw from")]
    EmptyWindow,

    #[error("evaluation budgets differ: {0} vs {1}")]
    BudgetMismatch(u64, u64),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code for the CLI: config errors are distinguishable from
    /// run failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 2,
            _ => 1,
        }
    }
}
