//! Numerical workbench for the Hilbert matrix operator on weighted Bergman spaces.

// `!(x < y)` is used on purpose so that NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod hilbert;
pub mod params;
pub mod quadrature;
pub mod region;
pub mod special;
pub mod verification;

pub use analytic::{binomial_series, AnalyticFn, PowerSeries, TestFunctionSpec};
pub use error::{Error, Result};
pub use params::SpaceParams;
pub use quadrature::{bergman_norm, integral_mean, QuadratureScheme};
pub use special::{beta, beta_partial, target_norm};
