//! Parameter-region curves and the classification of `(p, α)` by the
//! published result that settles the norm conjecture there.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::params::SpaceParams;
use crate::quadrature::rule::{converge, graded, plain, two_sided, Tolerance};
use crate::special::beta;

/// Upper end of the small-weight range settled by earlier work.
pub const SMALL_ALPHA_MAX: f64 = 1.0 / 47.0;

/// `α = 1` is matched with this absolute slack.
pub const ALPHA_ONE_TOL: f64 = 1e-12;

/// Both roots of the quartic band condition in `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBounds {
    pub low: f64,
    pub up: f64,
    /// `max(low, 0)`, the lower end of the band actually used.
    pub effective_low: f64,
}

/// `α_low(p)` and `α_up(p) = (6p³ − 29p² + 17p − 2 ∓ 2p√(6p² − 11p + 4))/(3p − 1)²`.
pub fn alpha_bounds(p: f64) -> Result<AlphaBounds> {
    let disc = 6.0 * p * p - 11.0 * p + 4.0;
    if !(disc >= 0.0) || p == 1.0 / 3.0 || !p.is_finite() {
        return domain(format!("curve undefined at p = {p}"));
    }
    let num = ((6.0 * p - 29.0) * p + 17.0) * p - 2.0;
    let root = 2.0 * p * disc.sqrt();
    let den = (3.0 * p - 1.0).powi(2);
    let low = (num - root) / den;
    let up = (num + root) / den;
    Ok(AlphaBounds {
        low,
        up,
        effective_low: low.max(0.0),
    })
}

pub fn alpha_up(p: f64) -> Result<f64> {
    alpha_bounds(p).map(|b| b.up)
}

pub fn alpha_low(p: f64) -> Result<f64> {
    alpha_bounds(p).map(|b| b.low)
}

/// The quartic whose nonpositivity defines the band `[α_low(p), α_up(p)]`.
pub fn quartic_condition(p: f64, alpha: f64) -> f64 {
    let a2 = (3.0 * p - 1.0).powi(2);
    let a1 = ((-12.0 * p + 58.0) * p - 34.0) * p + 4.0;
    let a0 = (((4.0 * p - 36.0) * p + 89.0) * p - 44.0) * p + 4.0;
    (a2 * alpha + a1) * alpha + a0
}

/// Whether the quadratic `k` degenerates (`3α + 10 − 2p = 0`).
fn is_linear_case(p: f64, alpha: f64) -> bool {
    let lead = 3.0 * alpha + 10.0 - 2.0 * p;
    lead.abs() <= 1e-12 * (3.0 * alpha.abs() + 10.0 + 2.0 * p.abs())
}

/// Discriminant of `k(r) = (3α/2 + 5 − p) r² + (a − 1) r + (a + p − 3α/2 − 4)`, `a = (α+2)/p`.
pub fn discriminant_k(p: f64, alpha: f64) -> Result<f64> {
    if p == 0.0 {
        return domain("p must be nonzero");
    }
    let a = (alpha + 2.0) / p;
    if is_linear_case(p, alpha) {
        return Err(Error::LinearCase { k_at_one: 2.0 * a });
    }
    let lead = 1.5 * alpha + 5.0 - p;
    let constant = a + p - 1.5 * alpha - 4.0;
    Ok((a - 1.0).powi(2) - 4.0 * lead * constant)
}

/// `Φ_α(x) = 2x² − (4(α+2) + 1)x + 2√(α+2)√x + α + 2`.
pub fn phi(alpha: f64, x: f64) -> f64 {
    let s = alpha + 2.0;
    2.0 * x * x - (4.0 * s + 1.0) * x + 2.0 * s.sqrt() * x.sqrt() + s
}

/// Bisection iterations allowed to [`phi_root`].
pub const PHI_ITERATIONS: usize = 200;
/// Residual accepted by [`phi_root`].
pub const PHI_TOL: f64 = 1e-10;

/// The zero `α₀` of `Φ_α` on `(α + 2, 2(α + 2))`.
pub fn phi_root(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return domain(format!("phi_root needs alpha > 0, got {alpha}"));
    }
    let (mut lo, mut hi) = (alpha + 2.0, 2.0 * (alpha + 2.0));
    let (mut f_lo, f_hi) = (phi(alpha, lo), phi(alpha, hi));
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..PHI_ITERATIONS {
        mid = 0.5 * (lo + hi);
        let f_mid = phi(alpha, mid);
        if f_mid == 0.0 || mid <= lo || mid >= hi {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let residual = phi(alpha, mid).abs();
    if residual > PHI_TOL {
        return Err(Error::Internal(format!(
            "bisection for the zero of Phi_{alpha} stalled with |Phi| = {residual:e}"
        )));
    }
    Ok(mid)
}

/// The bracket `(α+2+√((α+2)² − (α+2)), α+2+√((α+2)² − (√2 − 1/2)(α+2)))` around `α₀`.
pub fn alpha0_bracket(alpha: f64) -> (f64, f64) {
    let s = alpha + 2.0;
    (s + (s * s - s).sqrt(), s + (s * s - (SQRT_2 - 0.5) * s).sqrt())
}

/// `2 + 3α/4 + √(9α² + 40α + 48)/4`.
pub fn p1(alpha: f64) -> f64 {
    2.0 + 0.75 * alpha + 0.25 * (9.0 * alpha * alpha + 40.0 * alpha + 48.0).sqrt()
}

/// `(9 + 3α + √(9α² + 30α + 33))/4`.
pub fn p3(alpha: f64) -> f64 {
    (9.0 + 3.0 * alpha + (9.0 * alpha * alpha + 30.0 * alpha + 33.0).sqrt()) / 4.0
}

pub fn p4(alpha: f64) -> f64 {
    alpha + 2.0
}

pub fn p_double(alpha: f64) -> f64 {
    2.0 * (alpha + 2.0)
}

/// `α + 2 + √(α² + 7α/2 + 3)`.
pub fn lmw_curve(alpha: f64) -> f64 {
    alpha + 2.0 + (alpha * alpha + 3.5 * alpha + 3.0).sqrt()
}

/// `p ≥ p3(α)` rewritten as `α ≤ (2p² − 9p + 6)/(3p − 3)`.
pub fn p3_as_alpha(p: f64) -> Option<f64> {
    let den = 3.0 * p - 3.0;
    (den != 0.0).then(|| (2.0 * p * p - 9.0 * p + 6.0) / den)
}

/// The closed-form `α₀` upper bracket rewritten as `α ≤ (p² − 4p + 2√2 − 1)/(2p + 1/2 − √2)`.
pub fn alpha0_bound_as_alpha(p: f64) -> Option<f64> {
    let den = 2.0 * p + 0.5 - SQRT_2;
    (den != 0.0).then(|| (p * p - 4.0 * p + 2.0 * SQRT_2 - 1.0) / den)
}

/// `p ≥ p1(α)` rewritten as `α ≤ (2p² − 8p + 2)/(3p − 1)`.
pub fn p1_as_alpha(p: f64) -> Option<f64> {
    let den = 3.0 * p - 1.0;
    (den != 0.0).then(|| (2.0 * p * p - 8.0 * p + 2.0) / den)
}

/// `(−1 + √13)/6`, the positive root of `3α³ + 7α² + α − 2`.
pub fn cubic_threshold() -> f64 {
    (13f64.sqrt() - 1.0) / 6.0
}

pub fn cubic(alpha: f64) -> f64 {
    ((3.0 * alpha + 7.0) * alpha + 1.0) * alpha - 2.0
}

/// Both sides of the double-integral sufficient condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DaiCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// `∫_0^1 t^{a−1}(1−t)^{−a} ∫_{t²}^1 (1−r)^α r^{p−3−α} dr dt ≤ B(1+α, 2+α/2) B(a, 1−a)`.
///
/// With `r = 1 − (1 − x)v` the inner integral is `(1−x)^{α+1} J(x)`,
/// `J(x) = (1−x)^{p−3−α} ∫_0^1 v^α (1/(1−x) − v)^{p−3−α} dv`, and the outer
/// integrand carries `(1−t)^{α+1−a}` at the upper end.
pub fn dai_condition(params: SpaceParams) -> Result<DaiCheck> {
    params.require_bounded()?;
    let (p, alpha) = (params.p, params.alpha);
    let a = params.critical_exponent();
    let e = p - 3.0 - alpha;
    let inner = |gap: f64| -> Result<f64> {
        // gap = 1 − x > 0
        let pole = 1.0 / gap;
        let c = converge("inner integral", 4, 12, Tolerance::new(0.0, 1e-13), |level| {
            let left = graded(0.0, 0.5, 0.0, alpha, level)?;
            let l = left.integrate(|n| (1.0 - gap * n.x).powf(e));
            // the pole 1/(1 − x) only matters once it approaches v = 1
            let r = if gap > 0.5 {
                let right = graded(0.5, 1.0, pole, e, level)?;
                right.integrate(|n| n.x.powf(alpha) * gap.powf(e))
            } else {
                plain(0.5, 1.0, level).integrate(|n| n.x.powf(alpha) * (1.0 - gap * n.x).powf(e))
            };
            Ok(l + r)
        })?;
        Ok(c.value)
    };
    let outer = converge("outer integral", 4, 11, Tolerance::new(0.0, 1e-12), |level| {
        let rule = two_sided(0.0, 1.0, a - 1.0, alpha + 1.0 - a, level)?;
        let mut acc = 0.0;
        for n in &rule.nodes {
            let t = n.x;
            let gap = n.to_hi * (1.0 + t);
            acc += n.weight * (1.0 + t).powf(alpha + 1.0) * inner(gap)?;
        }
        Ok(acc)
    })?;
    let lhs = outer.value;
    let rhs = beta(1.0 + alpha, 2.0 + 0.5 * alpha)? * beta(a, 1.0 - a)?;
    Ok(DaiCheck {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// Catalog of results that settle the conjecture on part of the bounded range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Settlement {
    /// `0 ≤ α ≤ α_up(p)`.
    #[serde(rename = "THM_4_1")]
    Thm41,
    /// `max(α_low(p), 0) ≤ α ≤ α_up(p)`.
    #[serde(rename = "PROP_2_1")]
    Prop21,
    /// `α ≥ 0`, `p ≥ p3(α)`.
    #[serde(rename = "PROP_3_1")]
    Prop31,
    /// `α > 0`, `α + 2 + √(α² + 7α/2 + 3) ≤ p < 2(α+2)`.
    #[serde(rename = "PRIOR_III")]
    PriorIii,
    /// `α > 0`, `p ≥ α₀`.
    #[serde(rename = "PRIOR_IV")]
    PriorIv,
    /// `α > 0`, `p ≥ p1(α)`; or `−1 < α < 0`, `p ≥ 2(α+2)`.
    #[serde(rename = "PRIOR_V_VI")]
    PriorVVi,
    /// `0 < α ≤ 1/47`.
    #[serde(rename = "SMALL_ALPHA")]
    SmallAlpha,
    /// `α = 1`, `p > 3`.
    #[serde(rename = "ALPHA_ONE")]
    AlphaOne,
    /// `α ≥ 0`, `p ≥ 2(α+2)`.
    #[serde(rename = "LARGE_P")]
    LargeP,
}

impl Settlement {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Thm41 => "THM_4_1",
            Self::Prop21 => "PROP_2_1",
            Self::Prop31 => "PROP_3_1",
            Self::PriorIii => "PRIOR_III",
            Self::PriorIv => "PRIOR_IV",
            Self::PriorVVi => "PRIOR_V_VI",
            Self::SmallAlpha => "SMALL_ALPHA",
            Self::AlphaOne => "ALPHA_ONE",
            Self::LargeP => "LARGE_P",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Unbounded,
    Settled,
    Open,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Unbounded => "UNBOUNDED",
            Self::Settled => "SETTLED",
            Self::Open => "OPEN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub p: f64,
    pub alpha: f64,
    pub status: Status,
    pub settled_by: Vec<Settlement>,
    pub witnesses: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl RegionVerdict {
    pub fn settled_by(&self, s: Settlement) -> bool {
        self.settled_by.contains(&s)
    }

    pub fn settled_labels(&self) -> Vec<&'static str> {
        self.settled_by.iter().map(Settlement::label).collect()
    }
}

/// Every catalog entry whose closed-form condition holds at `(p, α)`.
///
/// The double-integral condition needs quadrature and is left to [`dai_condition`].
pub fn classify(p: f64, alpha: f64) -> RegionVerdict {
    let mut witnesses = BTreeMap::new();
    let mut notes = Vec::new();
    let mut settled_by = Vec::new();
    let bounded = 1.0 < alpha + 2.0 && alpha + 2.0 < p;

    match alpha_bounds(p) {
        Ok(b) => {
            witnesses.insert("alpha_low".into(), b.low);
            witnesses.insert("alpha_up".into(), b.up);
            if bounded && alpha >= 0.0 && alpha <= b.up {
                settled_by.push(Settlement::Thm41);
            }
            if bounded && alpha >= b.effective_low && alpha <= b.up {
                settled_by.push(Settlement::Prop21);
            }
        }
        Err(_) => notes.push("alpha_bounds: not applicable (curve undefined)".into()),
    }
    for (name, value) in [
        ("p1", p1(alpha)),
        ("p3", p3(alpha)),
        ("p4", p4(alpha)),
        ("p_double", p_double(alpha)),
        ("lmw", lmw_curve(alpha)),
    ] {
        if value.is_finite() {
            witnesses.insert(name.into(), value);
        }
    }
    if alpha > -1.0 {
        let (lo, hi) = alpha0_bracket(alpha);
        if lo.is_finite() {
            witnesses.insert("alpha0_bracket_low".into(), lo);
        }
        if hi.is_finite() {
            witnesses.insert("alpha0_bracket_high".into(), hi);
        }
    }
    if !bounded {
        return RegionVerdict {
            p,
            alpha,
            status: Status::Unbounded,
            settled_by: Vec::new(),
            witnesses,
            notes,
        };
    }

    if alpha >= 0.0 && p >= p3(alpha) {
        settled_by.push(Settlement::Prop31);
    }
    if alpha > 0.0 && lmw_curve(alpha) <= p && p < p_double(alpha) {
        settled_by.push(Settlement::PriorIii);
    }
    if alpha > 0.0 {
        match phi_root(alpha) {
            Ok(root) => {
                witnesses.insert("alpha0".into(), root);
                if p >= root {
                    settled_by.push(Settlement::PriorIv);
                }
            }
            Err(e) => notes.push(format!("alpha0: not applicable ({e})")),
        }
        let (_, closed) = alpha0_bracket(alpha);
        if closed <= p && p < p_double(alpha) {
            notes.push("PRIOR_IV closed-form sufficient condition holds".into());
        }
    }
    if (alpha > 0.0 && p >= p1(alpha)) || (alpha < 0.0 && p >= p_double(alpha)) {
        settled_by.push(Settlement::PriorVVi);
    }
    if alpha > 0.0 && alpha <= SMALL_ALPHA_MAX {
        settled_by.push(Settlement::SmallAlpha);
    }
    if (alpha - 1.0).abs() <= ALPHA_ONE_TOL && p > 3.0 {
        settled_by.push(Settlement::AlphaOne);
    }
    if alpha >= 0.0 && p >= p_double(alpha) {
        settled_by.push(Settlement::LargeP);
    }
    if alpha < 0.0 && p < p_double(alpha) {
        notes.push("negative weight below 2(alpha+2): only upper estimates are known".into());
    }
    if alpha == 0.0 && p < 4.0 {
        notes.push("unweighted case: settled for 2 < p < 4 by results outside this catalog".into());
    }
    if p < p1(alpha) && alpha > 0.0 {
        notes.push("double-integral condition not evaluated; see `check dai`".into());
    }
    settled_by.sort();
    let status = if settled_by.is_empty() {
        Status::Open
    } else {
        Status::Settled
    };
    RegionVerdict {
        p,
        alpha,
        status,
        settled_by,
        witnesses,
        notes,
    }
}

/// Evenly spaced grid `min, min + step, …` up to `max` (inclusive within rounding).
pub fn grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(max >= min) || !min.is_finite() || !max.is_finite() {
        return domain(format!("malformed grid [{min}, {max}] step {step}"));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| min + step * i as f64).collect())
}

/// Classification over a `(p, α)` grid, ordered by `p` then `α`.
pub fn sweep(ps: &[f64], alphas: &[f64]) -> Vec<RegionVerdict> {
    let points: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| alphas.iter().map(move |&a| (p, a)))
        .collect();
    points.par_iter().map(|&(p, a)| classify(p, a)).collect()
}

/// The `p(α)` curves at one weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub p1: f64,
    pub p3: f64,
    pub p4: f64,
    pub p_double: f64,
    pub alpha0_low: f64,
    pub alpha0_high: f64,
    pub alpha0: Option<f64>,
    pub lmw: f64,
}

pub fn curve_row(alpha: f64) -> CurveRow {
    let (lo, hi) = alpha0_bracket(alpha);
    CurveRow {
        alpha,
        p1: p1(alpha),
        p3: p3(alpha),
        p4: p4(alpha),
        p_double: p_double(alpha),
        alpha0_low: lo,
        alpha0_high: hi,
        alpha0: phi_root(alpha).ok(),
        lmw: lmw_curve(alpha),
    }
}

/// The `α(p)` curves at one exponent; `None` where a curve is undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaCurveRow {
    pub p: f64,
    pub alpha_low: Option<f64>,
    pub alpha_up: Option<f64>,
    pub p3_as_alpha: Option<f64>,
    pub alpha0_bound_as_alpha: Option<f64>,
    pub p1_as_alpha: Option<f64>,
}

pub fn alpha_curve_row(p: f64) -> AlphaCurveRow {
    let b = alpha_bounds(p).ok();
    AlphaCurveRow {
        p,
        alpha_low: b.map(|b| b.low),
        alpha_up: b.map(|b| b.up),
        p3_as_alpha: p3_as_alpha(p),
        alpha0_bound_as_alpha: alpha0_bound_as_alpha(p),
        p1_as_alpha: p1_as_alpha(p),
    }
}

/// A failed sanity relation between the `α(p)` curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub p: f64,
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks `α_up(p) < p − 2`, `α_up(p) ≥` each rewritten curve where that
/// curve is defined and nonnegative, and `(2p² − 9p + 6)/(3p − 3) > α_low(p)` for `p > 2`.
pub fn region_sanity(ps: &[f64]) -> Vec<Violation> {
    let rows: Vec<Vec<Violation>> = ps
        .par_iter()
        .map(|&p| {
            let mut out = Vec::new();
            let Ok(b) = alpha_bounds(p) else {
                return out;
            };
            if !(b.up < p - 2.0) {
                out.push(Violation {
                    p,
                    relation: "alpha_up < p - 2".into(),
                    lhs: b.up,
                    rhs: p - 2.0,
                });
            }
            for (name, curve) in [
                ("p3_as_alpha", p3_as_alpha(p)),
                ("alpha0_bound_as_alpha", alpha0_bound_as_alpha(p)),
                ("p1_as_alpha", p1_as_alpha(p)),
            ] {
                if let Some(c) = curve {
                    if c >= 0.0 && !(b.up >= c) {
                        out.push(Violation {
                            p,
                            relation: format!("alpha_up >= {name}"),
                            lhs: b.up,
                            rhs: c,
                        });
                    }
                }
            }
            if p > 2.0 {
                if let Some(c) = p3_as_alpha(p) {
                    if !(c > b.low) {
                        out.push(Violation {
                            p,
                            relation: "p3_as_alpha > alpha_low".into(),
                            lhs: c,
                            rhs: b.low,
                        });
                    }
                }
            }
            out
        })
        .collect();
    rows.into_iter().flatten().collect()
}

/// Marked points of the `p(α)` picture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigurePoints {
    /// `(θ, α₀ lower bracket at θ)` with `θ` the cubic threshold.
    pub cubic_threshold_point: (f64, f64),
    /// `p3(θ)`, equal to the ordinate above when the two curves meet there.
    pub p3_at_threshold: f64,
    /// Crossings of `p1` and `p3` found on the scanned range (none expected for `α > 0`).
    pub p1_p3_crossings: Vec<f64>,
}

pub fn figure_points(alpha_max: f64, samples: usize) -> FigurePoints {
    let theta = cubic_threshold();
    let mut crossings = Vec::new();
    let samples = samples.max(2);
    let h = alpha_max / (samples - 1) as f64;
    let diff = |a: f64| p1(a) - p3(a);
    for i in 1..samples {
        let (a0, a1) = ((i - 1) as f64 * h, i as f64 * h);
        if diff(a0).signum() != diff(a1).signum() {
            crossings.push(0.5 * (a0 + a1));
        }
    }
    FigurePoints {
        cubic_threshold_point: (theta, alpha0_bracket(theta).0),
        p3_at_threshold: p3(theta),
        p1_p3_crossings: crossings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_at_reference_exponents() {
        let b = alpha_bounds(17.0).unwrap();
        assert!((b.low - 8.017995).abs() < 1e-5 && (b.up - 9.089205).abs() < 1e-5);
        let b = alpha_bounds(4.0).unwrap();
        assert!((b.up - 0.3790621).abs() < 1e-6);
        assert_eq!(b.effective_low, 0.0);
        assert!(alpha_bounds(1.0).is_err());
        assert!(alpha_bounds(1.0 / 3.0).is_err());
        let b = alpha_bounds(20.0).unwrap();
        assert!((b.low - 10.016854).abs() < 1e-5);
    }

    #[test]
    fn quartic_signs() {
        assert!(quartic_condition(17.0, 9.0) <= 0.0);
        assert!(quartic_condition(20.0, 9.0) > 0.0);
        for p in [1.5, 2.0, 4.0, 17.0, 40.0] {
            let b = alpha_bounds(p).unwrap();
            let scale = (3.0 * p - 1.0).powi(2) * (1.0 + b.up * b.up);
            assert!(quartic_condition(p, b.up).abs() <= 1e-9 * scale);
            assert!(quartic_condition(p, b.low).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn discriminant_matches_quartic() {
        assert!(discriminant_k(17.0, 9.0).unwrap() <= 0.0);
        assert!(discriminant_k(4.0, 1.0).unwrap() > 0.0);
        // p² Δ_k is the quartic
        for (p, a) in [(3.0, 0.2), (7.5, 2.0), (25.0, 11.0)] {
            let d = discriminant_k(p, a).unwrap();
            assert!((p * p * d - quartic_condition(p, a)).abs() < 1e-9 * p.powi(4));
        }
        match discriminant_k(6.5, 1.0) {
            Err(Error::LinearCase { k_at_one }) => assert!((k_at_one - 6.0 / 6.5).abs() < 1e-15),
            other => panic!("expected linear case, got {other:?}"),
        }
    }

    #[test]
    fn phi_zero_in_bracket() {
        let root = phi_root(1.0).unwrap();
        let (lo, hi) = alpha0_bracket(1.0);
        assert!(lo < root && root < hi, "{lo} < {root} < {hi}");
        assert!((lo - (3.0 + 6f64.sqrt())).abs() < 1e-14);
        assert!(phi(1.0, root).abs() <= PHI_TOL);
        assert!(phi_root(0.0).is_err());
        for a in [0.01, 0.5, 2.0, 10.0] {
            let s = a + 2.0;
            assert!(phi(a, s) < 0.0 && phi(a, 2.0 * s) > 0.0);
        }
    }

    #[test]
    fn cubic_root() {
        let t = cubic_threshold();
        assert!((t - 0.434258).abs() < 1e-6);
        assert!(cubic(t).abs() < 1e-12);
        assert_eq!(cubic(1.0), 9.0);
    }

    #[test]
    fn curve_spot_values() {
        assert!((p3(1.0) - (3.0 + 1.5 * SQRT_2)).abs() < 1e-14);
        assert!((p3(9.0) - 17.031).abs() < 1e-3);
        assert!((p3(0.0) - 3.68614).abs() < 1e-5);
        for i in 1..=200 {
            let a = i as f64 * 0.1;
            assert!(p4(a) < p3(a) && p3(a) < p1(a));
        }
    }

    #[test]
    fn dai_reference_point() {
        let d = dai_condition(SpaceParams::new(4.0, 0.0).unwrap()).unwrap();
        let exact = 0.5 * (std::f64::consts::PI - beta(4.5, 0.5).unwrap());
        assert!((d.lhs - exact).abs() < 1e-9, "{} vs {exact}", d.lhs);
        assert!((d.rhs - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(d.holds);
        let d = dai_condition(SpaceParams::new(4.0, 1.0).unwrap()).unwrap();
        assert!((d.rhs - 0.5077580500752418).abs() < 1e-12);
        assert!(d.lhs >= 0.0);
    }

    #[test]
    fn reference_classifications() {
        let v = classify(17.0, 9.0);
        assert_eq!(v.status, Status::Settled);
        assert!(v.settled_by(Settlement::Thm41) && v.settled_by(Settlement::Prop21));
        assert!(!v.settled_by(Settlement::Prop31));
        let v = classify(20.0, 9.0);
        assert!(v.settled_by(Settlement::Thm41) && v.settled_by(Settlement::Prop31));
        assert!(!v.settled_by(Settlement::Prop21));
        assert_eq!(classify(3.0, 2.0).status, Status::Unbounded);
        let v = classify(2.5, 0.0);
        assert_eq!(v.status, Status::Open);
        assert!(v.witnesses["alpha_up"] < 0.0);
        let v = classify(1.2, -0.9);
        assert!(v.notes.iter().any(|n| n.contains("not applicable")));
        assert_eq!(v.status, Status::Open);
        assert!(classify(5.0, 1.0).settled_by(Settlement::AlphaOne));
        assert!(classify(3.0, -0.5).settled_by(Settlement::PriorVVi));
    }

    #[test]
    fn grid_is_inclusive() {
        let g = grid(1.5, 50.0, 0.01).unwrap();
        assert_eq!(g.len(), 4851);
        assert!((g.last().unwrap() - 50.0).abs() < 1e-9);
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn figure_points_report_both_candidates() {
        let f = figure_points(20.0, 2001);
        assert!(f.p1_p3_crossings.is_empty());
        let (theta, ordinate) = f.cubic_threshold_point;
        assert!((ordinate - f.p3_at_threshold).abs() < 1e-12);
        let s = (11.0 + 13f64.sqrt()) / 6.0;
        assert!((theta + 2.0 - s).abs() < 1e-15);
        assert!((ordinate - (s + (s * s - s).sqrt())).abs() < 1e-12);
    }
}
