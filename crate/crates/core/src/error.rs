//! Crate-wide error type.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A physical parameter violates its documented range at construction.
    #[error("invalid {field}: {message}")]
    Spec {
        field: &'static str,
        message: String,
    },

    /// An operation was called with an argument outside its domain.
    #[error("domain error in {op}: {message}")]
    Domain { op: &'static str, message: String },

    /// A configuration line could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A configuration key is not recognized in its section.
    #[error("unknown key `{key}` in [{section}] at line {line}")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },

    /// A configuration section header is not recognized.
    #[error("unknown section [{section}] at line {line}")]
    UnknownSection { line: usize, section: String },

    /// A parsed configuration value violates the field's legal range.
    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },

    /// A slide-trace analysis window contains no samples.
    #[error("analysis window contains no samples")]
    EmptyWindow,

    /// A slide-trace sample has a normal force too small to divide by.
    #[error("normal force magnitude at t = {time} is below 1e-3 N")]
    DegenerateNormal { time: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
