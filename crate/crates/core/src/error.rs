use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A label set was malformed or was not contained where it had to be.
    #[error("label error: {0}")]
    Label(String),

    /// An operator or parameter failed validation (Hermiticity, symmetry, shape).
    #[error("validation error: {0}")]
    Validation(String),

    /// A size guard tripped before an exponential computation started.
    #[error("resource limit: {what} = {requested} exceeds {limit}")]
    Resource {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// Two operands that must agree (dimension, sequence length, kind) did not.
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn label_err(msg: &str, labels: &[usize]) -> Error {
    let mut s = String::from(msg);
    s.push_str(": ");
    s.push_str(&fmt_labels(labels));
    Error::Label(s)
}

pub(crate) fn fmt_labels(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(|l| alloc::format!("{l}")).collect();
    alloc::format!("{{{}}}", parts.join(","))
}
