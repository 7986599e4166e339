use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed-form expression was requested outside its validity window.
    #[error("no closed form for N={n} at s={s}: valid windows are {valid}")]
    Window { n: usize, s: f64, valid: String },

    /// An iteration failed to converge or a bracket carried no sign change.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A bracketed root search found no sign change.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// A file did not match the expected format.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
