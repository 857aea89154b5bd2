use thiserror::Error;

/// Errors raised by the scoring, aggregation and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A value supplied by the caller violates an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// Gain calibration was asked for a non-positive best performer.
    #[error("cannot calibrate gain: {0}")]
    Calibration(String),

    /// An indicator has no positive value, so there is no best performer to scale to.
    #[error("indicator {0} is degenerate: every value is zero")]
    DegenerateIndicator(String),

    /// A parameter required by the chosen mode was not supplied.
    #[error("missing parameter: {0}")]
    MissingParameter(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    /// Two tables that must cover the same institutions do not.
    #[error("institution sets differ: {0}")]
    SetMismatch(String),

    #[error("matrix is not a valid correlation matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("eigen-solver did not converge after {0} sweeps")]
    NoConvergence(usize),

    /// A malformed or out-of-range value found while reading a file.
    #[error("{source_name}: line {line}, column `{column}`: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input (files, flags, values)
    /// rather than a computation that cannot proceed on valid input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::MissingParameter(_)
                | Error::SetMismatch(_)
                | Error::InvalidMatrix(_)
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::Csv(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(what: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{what} must be finite, got {value}")))
    }
}
