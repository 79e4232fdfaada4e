use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the operator library and the `skl` front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A target function returned a non-finite value.
    #[error("non-finite function value {value} at {at}")]
    Evaluation { at: f64, value: f64 },

    /// A function selector, expression, grid or config line could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// Inconsistent or missing command-line parameters.
    #[error("usage error: {0}")]
    Usage(String),

    /// A computed quantity contradicts an invariant that must hold by construction.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_finite(at: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation { at, value })
    }
}
