//! Gamma/Beta evaluations and the singular partial Beta integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::params::SpaceParams;
use crate::quadrature::rule::{converge, graded, Tolerance};

/// Absolute tolerance promised by [`beta_partial`].
pub const BETA_PARTIAL_TOL: f64 = 1e-10;

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x+y)` through log-Gamma.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return domain(format!("beta needs positive arguments, got ({x}, {y})"));
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

/// The conjectured norm `π / sin((α+2)π/p)`.
pub fn target_norm(params: SpaceParams) -> Result<f64> {
    params.require_bounded()?;
    Ok(PI / (params.critical_exponent() * PI).sin())
}

/// `∫_0^x t^{a−1} (1−t)^{−a} dt` for `0 ≤ x ≤ 1`, `0 < a < 1`.
///
/// Split at `1/2`; each half gets a rule graded toward its singular endpoint,
/// with node doubling until two successive values differ by less than a tenth
/// of [`BETA_PARTIAL_TOL`].
pub fn beta_partial(x: f64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return domain(format!("beta_partial exponent must lie in (0, 1), got {a}"));
    }
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("beta_partial upper limit must lie in [0, 1], got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let tol = Tolerance::new(BETA_PARTIAL_TOL / 10.0, 0.0);
    let near_zero = |hi: f64| {
        converge("beta_partial near 0", 4, 12, tol, |level| {
            let r = graded(0.0, hi, 0.0, a - 1.0, level)?;
            Ok(r.integrate(|n| (-a * (-n.x).ln_1p()).exp()))
        })
        .map(|c| c.value)
    };
    if x <= 0.5 {
        return near_zero(x);
    }
    let left = near_zero(0.5)?;
    let right = converge("beta_partial near 1", 4, 12, tol, |level| {
        let r = graded(0.5, x, 1.0, -a, level)?;
        Ok(r.integrate(|n| n.x.powf(a - 1.0)))
    })?;
    Ok(left + right.value)
}

/// `Σ_{n≥0} n!/(1+γ)_n w^n`, the series `₂F₁(1, 1; 1+γ; w)`, for `|w| ≤ 1/2`.
pub(crate) fn hyp_one_one(gamma: f64, w: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..400 {
        let nf = n as f64;
        term *= w * ((nf + 1.0) / (nf + 1.0 + gamma));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}
