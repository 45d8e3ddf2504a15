use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An evaluation point lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A guarded numerical condition failed (zero pivot, non-positive
    /// quantity that must be positive, eigensolver stall, ...).
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Loss of positivity in a recurrence known to be unstable.
    #[error("numerical instability: {0}")]
    Instability(String),

    /// An operation was called on a value in the wrong state.
    #[error("state error: {0}")]
    State(String),

    /// An evaluation point collided with an atom of a discrete measure.
    #[error("singularity: {0}")]
    Singularity(String),

    /// A polynomial-ratio recurrence hit a zero (real pole) at `index`.
    #[error("pole in ratio recurrence at index {index}: {message}")]
    Pole { index: usize, message: String },

    /// A requested construction would exceed addressable memory.
    #[error("size limit exceeded: {0}")]
    Size(String),

    /// The gap-root iteration did not converge within the sweep budget.
    #[error(
        "gap-root iteration did not converge after {iterations} sweeps \
         (max residual {max_residual:.3e}, last displacement {last_step:.3e})"
    )]
    Convergence {
        iterations: usize,
        max_residual: f64,
        last_step: f64,
        residuals: Vec<f64>,
    },

    /// A configured work budget was exhausted; partial results were produced.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// Process exit code for the CLI: 2 config/usage, 3 convergence,
    /// 4 budget/size abort, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Domain(_) | Error::State(_) | Error::Format(_) => 2,
            Error::Convergence { .. } => 3,
            Error::Budget(_) | Error::Size(_) => 4,
            _ => 1,
        }
    }
}
