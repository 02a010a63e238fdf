//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the domain of the operation.
    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// The operation has a pole or branch point at the input.
    #[error("{op}: pole or branch point at the input")]
    Pole { op: &'static str },

    /// The value at the input is the point at infinity.
    #[error("{op}: value is infinite at the input")]
    Infinite { op: &'static str },

    /// The input lies on the real ray covered by the real inverse; callers
    /// should fall back to `real::t0_inv`.
    #[error("h_inv: input lies on the real ray; use the real inverse")]
    RealBranch,

    /// No branch shift lands the preimage in the parameter trapezoid.
    #[error("{op}: point has no preimage in the closure of the domain")]
    OutsideDomain { op: &'static str },

    /// An internal cross-check failed.
    #[error("{op}: internal consistency check failed: {msg}")]
    Inconsistent { op: &'static str, msg: String },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}
