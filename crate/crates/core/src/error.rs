use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed domain descriptor `{descriptor}`: {reason}")]
    Descriptor { descriptor: String, reason: String },

    #[error("parameter `{name}` = {value} out of range: {expected}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("operation `{0}` requires a domain with nonempty interior")]
    Degenerate(&'static str),

    #[error("boundary data is not convex: {0}")]
    NotConvex(String),

    #[error(
        "geometry inconsistency at {at}: normal does not support the domain (offset {offset:e})"
    )]
    Geometry { at: Complex64, offset: f64 },

    #[error("root #{index} = {root} lies outside the domain (distance {distance:e})")]
    RootOutsideDomain {
        index: usize,
        root: Complex64,
        distance: f64,
    },

    #[error("invalid polynomial: {0}")]
    Polynomial(String),

    #[error("unknown interval bound variant `{0}` (expected `turan` or `lp`)")]
    UnknownVariant(String),

    #[error("budget too small: {0}")]
    Budget(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
