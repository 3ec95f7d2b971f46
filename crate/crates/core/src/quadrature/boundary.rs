//! Disk quadrature in polar coordinates about the boundary point `z = 1`.
//!
//! With `z = 1 − ρ e^{iψ}`, `ρ = 2 cos ψ · s`, the disk is `s ∈ (0,1)`,
//! `ψ ∈ (−π/2, π/2)`, and
//! `|1 − z|^{−λ} dm_α = (α+1)/π (2cos ψ)^κ s^β (1−s)^α ds dψ`
//! with `β = α + 1 − λ`, `κ = 2α + 2 − λ`. Both factors go into graded
//! weights, so functions growing like `|1 − z|^{−λ/p}` are integrated
//! after dividing out their singular part.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::rule::{converge, generic_grading, grading, two_sided_with, Converged, Tolerance};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskNode {
    pub z: Complex64,
    /// `1 − z`, accurate even where `z` rounds to `1`.
    pub w: Complex64,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryScheme {
    pub alpha: f64,
    pub lambda: f64,
    /// Gauss level of each half of the `s` rule.
    pub level: usize,
    /// Gauss level of each half of the angular rule.
    pub angular_level: usize,
    pub nodes: Vec<DiskNode>,
}

impl BoundaryScheme {
    /// Nodes for `∫ |1 − z|^{−λ} G(z) dm_α(z)`; needs `λ < α + 2`.
    pub fn new(alpha: f64, lambda: f64, level: usize) -> Result<Self> {
        Self::with_levels(alpha, lambda, level, level)
    }

    /// As [`BoundaryScheme::new`] with separate radial and angular levels.
    pub fn with_levels(alpha: f64, lambda: f64, level: usize, angular_level: usize) -> Result<Self> {
        if !(alpha > -1.0) {
            return domain(format!("alpha must exceed -1, got {alpha}"));
        }
        if !(lambda < alpha + 2.0) {
            return domain(format!(
                "|1-z|^-{lambda} is not integrable against dm_{alpha}"
            ));
        }
        let beta = alpha + 1.0 - lambda;
        let kappa = 2.0 * alpha + 2.0 - lambda;
        // integrands carry logs and fractional powers of ρ near z = 1, so the
        // ends touching z = 1 are always graded
        let s_rule = two_sided_with(
            0.0,
            1.0,
            (beta, generic_grading(beta)),
            (alpha, grading(alpha)),
            level,
        )?;
        let u_end = (kappa, generic_grading(kappa));
        let u_rule = two_sided_with(0.0, 1.0, u_end, u_end, angular_level)?;
        let mut nodes = Vec::with_capacity(s_rule.len() * u_rule.len());
        for u in &u_rule.nodes {
            // ψ = π(u − 1/2): cos ψ = sin(πu), sin ψ = −cos(πu)
            let near = u.from_lo.min(u.to_hi);
            let cos_psi = (PI * near).sin();
            let sin_psi = if u.from_lo <= u.to_hi {
                -(PI * near).cos()
            } else {
                (PI * near).cos()
            };
            let smooth = (2.0 * cos_psi / (u.from_lo * u.to_hi)).powf(kappa);
            let wu = (alpha + 1.0) * u.weight * smooth;
            for s in &s_rule.nodes {
                let rho = 2.0 * cos_psi * s.x;
                if rho <= 0.0 {
                    continue;
                }
                let w = Complex64::new(rho * cos_psi, rho * sin_psi);
                // 1 − |z|² = 4cos²ψ s(1 − s) > 0 keeps z inside even after rounding
                let z = Complex64::new(1.0 - w.re, -w.im);
                nodes.push(DiskNode {
                    z,
                    w,
                    weight: wu * s.weight,
                });
            }
        }
        Ok(Self {
            alpha,
            lambda,
            level,
            angular_level,
            nodes,
        })
    }

    pub fn refined(&self) -> Result<Self> {
        Self::with_levels(self.alpha, self.lambda, self.level + 1, self.angular_level + 1)
    }

    /// `Σ weight · g(node)`, parallel over fixed chunks and summed in order.
    pub fn integrate(&self, g: impl Fn(&DiskNode) -> f64 + Sync) -> f64 {
        let parts: Vec<f64> = self
            .nodes
            .par_chunks(1024)
            .map(|chunk| chunk.iter().map(|n| n.weight * g(n)).sum::<f64>())
            .collect();
        parts.iter().sum()
    }
}

/// `∫ |1 − z|^{−λ} g(z) dm_α(z)` with level doubling from `start`.
pub fn integrate_about_one(
    alpha: f64,
    lambda: f64,
    start: usize,
    max_level: usize,
    tol: Tolerance,
    g: impl Fn(&DiskNode) -> f64 + Sync,
) -> Result<Converged<f64>> {
    converge("disk integral about z = 1", start, max_level, tol, |level| {
        Ok(BoundaryScheme::new(alpha, lambda, level)?.integrate(&g))
    })
}
