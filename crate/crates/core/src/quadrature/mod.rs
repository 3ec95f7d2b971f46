//! Integral means and Bergman norms.

pub mod boundary;
pub mod gauss;
pub mod rule;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticFn;
use crate::error::{domain, Error, Result};
use crate::params::SpaceParams;

/// Relative agreement demanded between a scheme and its refinement.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Radial/angular node sets for integrals against `dm_α`.
///
/// The radial rule lives in `u = r²`, where `dm_α` becomes
/// `(α+1)(1−u)^α du × dθ/2π`; the factor `(1−u)^α` is absorbed into the
/// weights by a graded rule, so the weights sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureScheme {
    pub radial_nodes: Vec<f64>,
    /// `1 − r` at each radial node, kept separately to avoid cancellation.
    pub radial_gaps: Vec<f64>,
    pub radial_weights: Vec<f64>,
    pub angular_count: usize,
    pub singularity_exponent: f64,
    pub radial_level: usize,
    pub rel_tol: f64,
}

impl QuadratureScheme {
    pub fn new(alpha: f64, radial_level: usize, angular_count: usize) -> Result<Self> {
        if !(alpha > -1.0) {
            return domain(format!("alpha must exceed -1, got {alpha}"));
        }
        if angular_count == 0 {
            return domain("angular_count must be positive");
        }
        let rule = rule::graded(0.0, 1.0, 1.0, alpha, radial_level)?;
        let mut radial_nodes = Vec::with_capacity(rule.len());
        let mut radial_gaps = Vec::with_capacity(rule.len());
        let mut radial_weights = Vec::with_capacity(rule.len());
        for n in &rule.nodes {
            // nodes within an ulp of the rim keep their exact gap; r itself is
            // held just inside the circle
            let r = n.x.sqrt().min(1.0 - f64::EPSILON / 2.0);
            if !(r > 0.0) {
                continue;
            }
            radial_nodes.push(r);
            radial_gaps.push(n.to_hi / (1.0 + r));
            radial_weights.push((alpha + 1.0) * n.weight);
        }
        Ok(Self {
            radial_nodes,
            radial_gaps,
            radial_weights,
            angular_count,
            singularity_exponent: alpha,
            radial_level,
            rel_tol: DEFAULT_REL_TOL,
        })
    }

    /// Sized for polynomials of the given degree: at least `4·degree + 16` angles.
    pub fn for_degree(alpha: f64, degree: usize) -> Result<Self> {
        let level = (gauss::level_for(degree + 1) + 1).clamp(5, 11);
        Self::new(alpha, level, 4 * degree + 16)
    }

    /// Both node counts doubled.
    pub fn refined(&self) -> Result<Self> {
        let mut s = Self::new(
            self.singularity_exponent,
            (self.radial_level + 1).min(gauss::MAX_LEVEL),
            2 * self.angular_count,
        )?;
        s.rel_tol = self.rel_tol;
        Ok(s)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn len(&self) -> usize {
        self.radial_nodes.len() * self.angular_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every node `(z, 1 − z, weight)` with weights summing to one.
    pub fn disk_nodes(&self) -> Vec<(Complex64, Complex64, f64)> {
        let k = self.angular_count;
        let mut out = Vec::with_capacity(self.len());
        for ((&r, &gap), &wr) in self
            .radial_nodes
            .iter()
            .zip(&self.radial_gaps)
            .zip(&self.radial_weights)
        {
            for j in 0..k {
                let (z, w) = circle_point(r, gap, j, k);
                out.push((z, w, wr / k as f64));
            }
        }
        out
    }
}

/// `z = r e^{2πij/k}` and `1 − z` with the real part of the latter formed without cancellation.
pub(crate) fn circle_point(r: f64, gap: f64, j: usize, k: usize) -> (Complex64, Complex64) {
    let theta = 2.0 * PI * j as f64 / k as f64;
    let (s, c) = theta.sin_cos();
    let half = (0.5 * theta).sin();
    let z = Complex64::new(r * c, r * s);
    let w = Complex64::new(gap + 2.0 * r * half * half, -r * s);
    (z, w)
}

/// `M_p^p(r, f)` by the equispaced trapezoid rule with `k` angles; `gap = 1 − r`.
pub(crate) fn mean_pow<F: AnalyticFn + ?Sized>(f: &F, r: f64, gap: f64, p: f64, k: usize) -> f64 {
    let sum: f64 = (0..k)
        .map(|j| {
            let (z, w) = circle_point(r, gap, j, k);
            f.eval_at(z, w).norm().powf(p)
        })
        .sum();
    sum / k as f64
}

/// The integral mean `M_p(r, f)`.
pub fn integral_mean<F: AnalyticFn + ?Sized>(
    f: &F,
    r: f64,
    p: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return domain(format!("integral mean needs 0 <= r < 1, got {r}"));
    }
    if !(p > 0.0) {
        return domain(format!("p must be positive, got {p}"));
    }
    Ok(mean_pow(f, r, 1.0 - r, p, scheme.angular_count).powf(1.0 / p))
}

/// `∫ |f|^p dm_α` on one scheme, with a fixed-order reduction over radial nodes.
pub fn bergman_integral_on<F: AnalyticFn + ?Sized>(f: &F, p: f64, scheme: &QuadratureScheme) -> f64 {
    let k = scheme.angular_count;
    let parts: Vec<f64> = (0..scheme.radial_nodes.len())
        .into_par_iter()
        .map(|i| {
            scheme.radial_weights[i]
                * mean_pow(f, scheme.radial_nodes[i], scheme.radial_gaps[i], p, k)
        })
        .collect();
    parts.iter().sum()
}

/// Refinements tried by [`bergman_integral`] before giving up.
pub const MAX_REFINEMENTS: usize = 2;

/// `‖f‖^p_{A^p_α}`, checked against refined schemes.
///
/// The scheme is refined until two successive values agree to
/// `scheme.rel_tol`, at most [`MAX_REFINEMENTS`] times; persistent
/// disagreement (typically a profile that is not integrable) is reported as
/// non-convergence.
pub fn bergman_integral<F: AnalyticFn + ?Sized>(
    f: &F,
    params: SpaceParams,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    check_scheme(params, scheme)?;
    let mut prev = bergman_integral_on(f, params.p, scheme);
    let mut current = scheme.clone();
    let mut change = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        current = current.refined()?;
        let next = bergman_integral_on(f, params.p, &current);
        change = (next - prev).abs();
        if next.is_finite() && change <= scheme.rel_tol * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence {
        what: "bergman norm".into(),
        nodes: current.len(),
        last_change: change,
    })
}

/// `‖f‖_{A^p_α}`.
pub fn bergman_norm<F: AnalyticFn + ?Sized>(
    f: &F,
    params: SpaceParams,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    Ok(bergman_integral(f, params, scheme)?.powf(1.0 / params.p))
}

fn check_scheme(params: SpaceParams, scheme: &QuadratureScheme) -> Result<()> {
    if (scheme.singularity_exponent - params.alpha).abs() > 1e-15 {
        return domain(format!(
            "scheme built for alpha = {}, used with alpha = {}",
            scheme.singularity_exponent, params.alpha
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{binomial_coeffs, binomial_series, PowerSeries};
    use crate::special::beta;

    fn params(p: f64, a: f64) -> SpaceParams {
        SpaceParams::new(p, a).unwrap()
    }

    #[test]
    fn weights_are_normalised() {
        for alpha in [-0.9, -0.5, 0.0, 0.3, 1.0, 9.0, 17.5] {
            let s = QuadratureScheme::new(alpha, 6, 8).unwrap();
            let total: f64 = s.radial_weights.iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "alpha={alpha}: {total}");
            assert!(s.radial_weights.iter().all(|&w| w > 0.0));
            assert!(s.radial_nodes.iter().all(|&r| r > 0.0 && r < 1.0));
        }
    }

    #[test]
    fn means_of_simple_functions() {
        let s = QuadratureScheme::for_degree(0.0, 512).unwrap();
        let one = PowerSeries::from_real(&[1.0]);
        let z = PowerSeries::monomial(1);
        for p in [1.0, 2.5, 7.0] {
            assert!((integral_mean(&one, 0.4, p, &s).unwrap() - 1.0).abs() < 1e-14);
            let v = integral_mean(&z, 0.7, p, &s).unwrap();
            assert!((v - 0.7).abs() < 1e-13, "{v}");
        }
        let f = binomial_series(1.0, 512);
        let m = integral_mean(&f, 0.5, 2.0, &s).unwrap();
        assert!((m - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(integral_mean(&f, 1.0, 2.0, &s).is_err());
    }

    #[test]
    fn norms_of_simple_functions() {
        let one = PowerSeries::from_real(&[1.0]);
        let z = PowerSeries::monomial(1);
        let s = QuadratureScheme::for_degree(0.0, 1).unwrap();
        assert!((bergman_norm(&one, params(3.0, 0.0), &s).unwrap() - 1.0).abs() < 1e-12);
        let v = bergman_norm(&z, params(2.0, 0.0), &s).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn monomial_moments_match_beta() {
        for alpha in [-0.5, 0.0, 1.0, 4.5] {
            for k in [0usize, 1, 3, 10] {
                let s = QuadratureScheme::for_degree(alpha, k).unwrap();
                let v = bergman_integral(&PowerSeries::monomial(k), params(2.0, alpha), &s).unwrap();
                let exact = (alpha + 1.0) * beta(k as f64 + 1.0, alpha + 1.0).unwrap();
                assert!((v - exact).abs() < 1e-10, "alpha={alpha} k={k}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn binomial_norm_matches_coefficient_sum() {
        let c = binomial_coeffs(0.4, 512);
        let exact: f64 = c
            .iter()
            .enumerate()
            .map(|(n, x)| x * x / (n as f64 + 1.0))
            .sum::<f64>()
            .sqrt();
        let f = binomial_series(0.4, 512);
        // p = 2 needs only degree + 1 angles for exactness
        let s = QuadratureScheme::new(0.0, 9, 1040).unwrap();
        let v = bergman_norm(&f, params(2.0, 0.0), &s).unwrap();
        assert!((v - exact).abs() < 1e-6, "{v} vs {exact}");
    }

    #[test]
    fn mismatched_scheme_is_rejected() {
        let s = QuadratureScheme::for_degree(1.0, 2).unwrap();
        let one = PowerSeries::from_real(&[1.0]);
        assert!(bergman_norm(&one, params(3.0, 0.0), &s).is_err());
    }
}
