//! Grid checks of the auxiliary functions `F`, `g`, `k` behind the upper bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::SpaceParams;
use crate::region::{alpha_bounds, quartic_condition};
use crate::special::beta_partial;

/// Left end of the `r` grid; `F` is only claimed on `(0, 1]`.
pub const GRID_START: f64 = 1e-6;
/// `g` diverges at `r = 1`; its grid stops here.
pub const G_GRID_END: f64 = 1.0 - 1e-6;
/// Slack allowed below zero for `min k` and for `g` increments.
pub const SIGN_SLACK: f64 = 1e-12;
/// `max F ≤ F_TOL · (1 + |F(1/2)|)` is required in the band.
pub const F_TOL: f64 = 1e-10;

fn require_lemma_params(params: SpaceParams) -> Result<f64> {
    let s = params.alpha + 2.0;
    if !(params.p > s && s > 0.0) {
        return domain(format!(
            "needs p > alpha + 2 > 0, got p = {}, alpha = {}",
            params.p, params.alpha
        ));
    }
    Ok(params.critical_exponent())
}

/// `F(r) = r^{p−4−3α/2} B_{2r/(1+r)}(a, 1−a) − B(a, 1−a)`; `F(1) = 0` exactly.
pub fn f_function(params: SpaceParams, r: f64) -> Result<f64> {
    let a = require_lemma_params(params)?;
    let full = beta_partial(1.0, a)?;
    f_with_full(params, a, full, r)
}

fn f_with_full(params: SpaceParams, a: f64, full: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return domain(format!("F needs 0 < r <= 1, got {r}"));
    }
    if r == 1.0 {
        return Ok(0.0);
    }
    let exponent = params.p - 4.0 - 1.5 * params.alpha;
    Ok(r.powf(exponent) * beta_partial(2.0 * r / (1.0 + r), a)? - full)
}

/// `k(r) = (3α/2 + 5 − p) r² + (a − 1) r + (a + p − 3α/2 − 4)`.
pub fn k_poly(params: SpaceParams, r: f64) -> f64 {
    let (p, alpha) = (params.p, params.alpha);
    let a = (alpha + 2.0) / p;
    ((1.5 * alpha + 5.0 - p) * r + (a - 1.0)) * r + (a + p - 1.5 * alpha - 4.0)
}

/// `g(r) = (p − 4 − 3α/2) B_{2r/(1+r)}(a, 1−a) + (2r)^a / ((1+r)(1−r)^a)` on `[0, 1)`.
pub fn g_aux(params: SpaceParams, r: f64) -> Result<f64> {
    let a = require_lemma_params(params)?;
    if !(0.0..1.0).contains(&r) {
        return domain(format!("g needs 0 <= r < 1, got {r}"));
    }
    let c = params.p - 4.0 - 1.5 * params.alpha;
    let tail = (2.0 * r).powf(a) / ((1.0 + r) * (1.0 - r).powf(a));
    Ok(c * beta_partial(2.0 * r / (1.0 + r), a)? + tail)
}

/// Whether `(p, α)` lies in the band `α_low(p) ≤ α ≤ α_up(p)`.
pub fn in_band(params: SpaceParams) -> bool {
    alpha_bounds(params.p).is_ok() && quartic_condition(params.p, params.alpha) <= 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub params: SpaceParams,
    pub grid_size: usize,
    pub max_f: f64,
    pub argmax_f: f64,
    pub f_half: f64,
    pub f_tolerance: f64,
    pub min_k: f64,
    pub min_g_increment: f64,
    pub in_region: bool,
    /// `None` outside the band, where the run is exploratory only.
    pub passed: Option<bool>,
}

/// Evaluates `F` on `grid_size` uniform points of `[1e−6, 1]`, `k` on `[0, 1]`
/// and the increments of `g` on `[1e−6, 1 − 1e−6]`.
pub fn verify_lemma(params: SpaceParams, grid_size: usize) -> Result<LemmaReport> {
    let a = require_lemma_params(params)?;
    if grid_size < 2 {
        return domain("grid needs at least two points");
    }
    let full = beta_partial(1.0, a)?;
    let n = grid_size;
    let at = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;

    let fs: Vec<Result<(f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let r = if i == n - 1 { 1.0 } else { at(GRID_START, 1.0, i) };
            Ok((r, f_with_full(params, a, full, r)?))
        })
        .collect();
    let mut max_f = f64::NEG_INFINITY;
    let mut argmax_f = 0.0;
    for v in fs {
        let (r, f) = v?;
        if f > max_f {
            max_f = f;
            argmax_f = r;
        }
    }
    let f_half = f_with_full(params, a, full, 0.5)?;
    let f_tolerance = F_TOL * (1.0 + f_half.abs());

    let min_k = (0..n)
        .map(|i| k_poly(params, at(0.0, 1.0, i)))
        .fold(f64::INFINITY, f64::min);

    let gs: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| g_aux(params, at(GRID_START, G_GRID_END, i)))
        .collect();
    let gs: Vec<f64> = gs.into_iter().collect::<Result<_>>()?;
    let min_g_increment = gs
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);

    let in_region = in_band(params);
    let passed = in_region.then(|| {
        max_f <= f_tolerance && min_k >= -SIGN_SLACK && min_g_increment >= -SIGN_SLACK
    });
    Ok(LemmaReport {
        params,
        grid_size,
        max_f,
        argmax_f,
        f_half,
        f_tolerance,
        min_k,
        min_g_increment,
        in_region,
        passed,
    })
}

/// Seeded draws of `(p, α)` in the band with `α ≥ 0` and `p ∈ [p_min, p_max]`.
pub fn sample_in_region(count: usize, seed: u64, p_min: f64, p_max: f64) -> Result<Vec<SpaceParams>> {
    if !(p_min < p_max) || !(p_min > 0.0) {
        return domain(format!("malformed sampling range [{p_min}, {p_max}]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return domain("sampling range contains no admissible band");
        }
        let p = rng.random_range(p_min..p_max);
        let Ok(b) = alpha_bounds(p) else { continue };
        if b.up < b.effective_low {
            continue;
        }
        let alpha = if b.up > b.effective_low {
            rng.random_range(b.effective_low..b.up)
        } else {
            b.up
        };
        let Ok(params) = SpaceParams::new(p, alpha) else { continue };
        if params.is_bounded() && in_band(params) {
            out.push(params);
        }
    }
    Ok(out)
}

/// Default `p` range for sampled verification.
pub const SAMPLE_P_RANGE: (f64, f64) = (1.5, 50.0);
