use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Node doubling failed to stabilise a quadrature value.
    #[error("{what}: no convergence after {nodes} nodes (last change {last_change:e})")]
    NonConvergence {
        what: String,
        nodes: usize,
        last_change: f64,
    },

    /// A bracketing root finder found no sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The quadratic k degenerates to a linear function (3α + 10 − 2p = 0).
    #[error("linear case: 3*alpha + 10 - 2p = 0, k is decreasing with k(1) = {k_at_one}")]
    LinearCase { k_at_one: f64 },

    /// A numerical invariant that should hold by construction was violated.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
