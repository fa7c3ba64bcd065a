use thiserror::Error;

/// Everything that can go wrong in the library. Variants are coarse on
/// purpose: callers mostly want to know whether the inputs were bad
/// (`Domain`, `Assumption`, `Config`, `NoSolution`) or the numerics broke
/// down along the way (`Singular`, `Integration`).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: argument outside the domain ({detail})")]
    Domain { op: &'static str, detail: String },

    #[error("{op}: singular parameter ({detail})")]
    Singular { op: &'static str, detail: String },

    #[error("assumption {which} violated: {detail}")]
    Assumption { which: &'static str, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("integration failed at t = {t}: {detail}")]
    Integration { t: f64, detail: String },

    #[error("{op}: no solution ({detail})")]
    NoSolution { op: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }

    pub(crate) fn singular(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Singular { op, detail: detail.into() }
    }

    pub(crate) fn config(detail: impl Into<String>) -> Self {
        Error::Config(detail.into())
    }

    /// True for errors caused by the inputs rather than by the numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::Assumption { .. } | Error::Config(_) | Error::NoSolution { .. }
        )
    }
}
