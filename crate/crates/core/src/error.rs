use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of a constitutive law or inversion.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solve failed to converge or left its admissible bracket.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// Far-field data does not connect through a 1-rarefaction and a 3-rarefaction.
    #[error("not a rarefaction configuration: {0}")]
    NotRarefaction(String),

    /// The discrete solution lost positivity or produced a non-finite value.
    #[error("numerical blow-up at t = {t}, cell {cell}: {what}")]
    BlowUp { t: f64, cell: usize, what: String },

    /// Scenario data violates a model invariant.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Reading or writing a file failed.
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// Broken internal assumption.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
