use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument within the exclusion radius of a gamma pole.
    #[error("argument {z} is within {radius:e} of a gamma pole")]
    PoleAdjacent { z: Complex64, radius: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("requested accuracy {requested:e} not reached (estimate {achieved:e}): {context}")]
    AccuracyUnreachable {
        requested: f64,
        achieved: f64,
        context: String,
    },

    #[error("unknown preset form `{0}`")]
    UnknownPreset(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("enumeration cap reached: {0}")]
    EnumerationCap(String),

    #[error("configuration error: {0}")]
    Config(String),
}
