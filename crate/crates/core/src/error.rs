use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error(
        "truncation dimension {dim} leaves tail mass {tail:e} above budget {budget:e} (mean photon number {mean_photons})"
    )]
    Truncation {
        dim: usize,
        tail: f64,
        budget: f64,
        mean_photons: f64,
    },

    #[error("invalid grid `{spec}`: {reason}")]
    InvalidGrid { spec: String, reason: String },

    #[error("sweep would produce {requested} rows, above the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("unknown preset `{0}` (expected `natural` or `giant-eit`)")]
    UnknownPreset(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
