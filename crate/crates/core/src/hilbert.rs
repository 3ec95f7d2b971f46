//! The Hilbert matrix operator and the weighted-composition quantities behind
//! its integral representation `H f = ∫_0^1 T_t f dt`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticFn, Binomial, PowerSeries};
use crate::error::{domain, Error, Result};
use crate::params::SpaceParams;
use crate::quadrature::boundary::{integrate_about_one, DiskNode};
use crate::quadrature::gauss::level_for;
use crate::quadrature::rule::{
    converge, generic_grading, graded, grading, two_sided, two_sided_with, Converged, Tolerance,
};
use crate::quadrature::{mean_pow, QuadratureScheme};
use crate::special::{beta, hyp_one_one};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `b_n = Σ_k a_k/(n+k+1)` for `n ≤ out_degree`, with the row-sum tail bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertImage {
    pub series: PowerSeries,
    /// `Σ |a_k|`; every omitted coefficient satisfies `|b_n| ≤ abs_sum/(n+1)`.
    pub abs_sum: f64,
}

impl HilbertImage {
    pub fn tail_bound(&self, n: usize) -> f64 {
        self.abs_sum / (n as f64 + 1.0)
    }

    /// Bound on `|Σ_{n > N} b_n z^n|` for the omitted terms.
    pub fn truncation_error(&self, z: Complex64) -> f64 {
        let r = z.norm();
        if r >= 1.0 {
            return f64::INFINITY;
        }
        let n = self.series.degree() as f64;
        self.abs_sum * r.powf(n + 1.0) / ((n + 2.0) * (1.0 - r))
    }
}

/// Coefficient form of the operator.
pub fn apply_coeff(a: &PowerSeries, out_degree: usize) -> HilbertImage {
    let coeffs = (0..=out_degree)
        .map(|n| {
            a.coeffs
                .iter()
                .enumerate()
                .map(|(k, &ak)| ak / (n + k + 1) as f64)
                .sum()
        })
        .collect();
    HilbertImage {
        series: PowerSeries::new(coeffs),
        abs_sum: a.abs_sum(),
    }
}

/// Exponent `γ` with `|f(z)| ≍ |1 − z|^{−γ}` near `z = 1`, used to grade the `t` rule.
pub trait BoundaryGrowth {
    fn boundary_growth(&self) -> f64 {
        0.0
    }
}

impl BoundaryGrowth for PowerSeries {}

impl BoundaryGrowth for Binomial {
    fn boundary_growth(&self) -> f64 {
        self.gamma
    }
}

/// `∫_0^1 ω_t(z) f(φ_t(z)) dt` on a fixed rule with `2^level` nodes.
///
/// `1 − φ_t(z) = (1 − t)(1 − z) ω_t(z)` goes to 1 as `t → 1`, so the rule is
/// graded there by the growth exponent of `f`.
fn composition_integral_at<F: AnalyticFn + BoundaryGrowth + ?Sized>(
    f: &F,
    z: Complex64,
    w: Complex64,
    level: usize,
) -> Result<Complex64> {
    let gamma = f.boundary_growth();
    let rule = graded(0.0, 1.0, 1.0, -gamma, level)?;
    Ok(rule.integrate_complex(|n| {
        let omega = 1.0 / (w + z * n.x);
        let phi = omega * n.x;
        let one_minus_phi = w * omega * n.to_hi;
        let undo = if gamma == 0.0 { 1.0 } else { n.to_hi.powf(gamma) };
        omega * f.eval_at(phi, one_minus_phi) * undo
    }))
}

/// Integral form of the operator at a point of the open disk.
pub fn apply_integral<F: AnalyticFn + BoundaryGrowth + ?Sized>(f: &F, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return domain(format!("|z| = {} is not inside the unit disk", z.norm()));
    }
    let w = ONE - z;
    converge(
        "weighted-composition integral",
        4,
        12,
        Tolerance::new(1e-13, 1e-13),
        |level| composition_integral_at(f, z, w, level),
    )
    .map(|c| c.value)
}

/// `q_k(z) = H(z^k)(z) = ∫_0^1 s^k/(1 − s z) ds` for `k < n`.
///
/// Close to `z = 1` the upward recurrence `q_k = (q_{k−1} − 1/k)/z` from
/// `q_0 = −Log(1 − z)/z` is used; elsewhere `q_{n−1}` is computed by quadrature
/// and the stable downward recurrence `q_{k−1} = z q_k + 1/k` fills the rest.
pub fn monomial_images(z: Complex64, w: Complex64, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let near = 0.1f64.min(2.0 / n as f64);
    let mut q = vec![Complex64::new(0.0, 0.0); n];
    if w.norm() < near {
        q[0] = -w.ln() / z;
        for k in 1..n {
            q[k] = (q[k - 1] - 1.0 / k as f64) / z;
        }
        return Ok(q);
    }
    let top = n - 1;
    let last = converge("monomial image", 4, 13, Tolerance::new(1e-15, 1e-14), |level| {
        let rule = graded(0.0, 1.0, 0.0, top as f64, level)?;
        Ok(rule.integrate_complex(|nd| 1.0 / (ONE - z * nd.x)))
    })?;
    q[top] = last.value;
    for k in (1..=top).rev() {
        q[k - 1] = z * q[k] + 1.0 / k as f64;
    }
    Ok(q)
}

/// `H f` for a polynomial `f`, evaluated exactly through monomial images.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyImage {
    pub input: PowerSeries,
}

impl PolyImage {
    pub fn new(input: PowerSeries) -> Self {
        Self { input }
    }

    pub fn try_eval(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        let q = monomial_images(z, w, self.input.coeffs.len())?;
        Ok(self.input.coeffs.iter().zip(&q).map(|(a, q)| a * q).sum())
    }
}

impl AnalyticFn for PolyImage {
    fn eval_at(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.try_eval(z, w)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// `H f_γ` for the untruncated `f_γ = (1 − z)^{−γ}`, `0 ≤ γ < 1`.
///
/// For `|1 − z| < 1/2` the connection formula
/// `H f_γ(z) = B(γ, 1−γ) (1−z)^{−γ} z^{γ−1} − ₂F₁(1, 1; 1+γ; 1−z)/γ`
/// is used (`−Log(1−z)/z` when `γ = 0`); elsewhere the composition integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialImage {
    pub gamma: f64,
    reflection: f64,
}

/// Gauss level for the far-field composition integral of [`BinomialImage`].
const FAR_LEVEL: usize = 6;

impl BinomialImage {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return domain(format!("image of (1-z)^-gamma needs 0 <= gamma < 1, got {gamma}"));
        }
        let reflection = if gamma > 0.0 { beta(gamma, 1.0 - gamma)? } else { 0.0 };
        Ok(Self { gamma, reflection })
    }

    /// `(1 − z)^γ H f_γ(z)`, bounded near `z = 1`.
    pub fn scaled(&self, z: Complex64, w: Complex64) -> Complex64 {
        let g = self.gamma;
        if w.norm() < 0.5 {
            if g == 0.0 {
                return -w.ln() / z;
            }
            let wg = (g * w.ln()).exp();
            let zg = ((g - 1.0) * z.ln()).exp();
            return zg * self.reflection - wg * hyp_one_one(g, w) / g;
        }
        self.far(z, w) * (g * w.ln()).exp()
    }

    fn far(&self, z: Complex64, w: Complex64) -> Complex64 {
        composition_integral_at(&Binomial { gamma: self.gamma }, z, w, FAR_LEVEL)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

impl AnalyticFn for BinomialImage {
    fn eval_at(&self, z: Complex64, w: Complex64) -> Complex64 {
        if w.norm() < 0.5 {
            self.scaled(z, w) * (-self.gamma * w.ln()).exp()
        } else {
            self.far(z, w)
        }
    }
}

/// `∫ |H f|^p dm_α` for a polynomial `f`, integrated about the logarithmic
/// singularity at `z = 1`.
pub fn image_norm_pow(f: &PowerSeries, params: SpaceParams, rel_tol: f64) -> Result<Converged<f64>> {
    let image = PolyImage::new(f.clone());
    let p = params.p;
    integrate_about_one(
        params.alpha,
        0.0,
        4,
        9,
        Tolerance::new(0.0, rel_tol),
        |n: &DiskNode| image.eval_at(n.z, n.w).norm().powf(p),
    )
}

/// The disk `D_t = φ_t(𝔻)` and the maps `ω_t`, `φ_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositionData {
    pub t: f64,
    pub center: f64,
    pub radius: f64,
}

impl CompositionData {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return domain(format!("composition parameter must lie in (0, 1), got {t}"));
        }
        Ok(Self {
            t,
            center: 1.0 / (2.0 - t),
            radius: (1.0 - t) / (2.0 - t),
        })
    }

    /// `center − radius = t/(2 − t)`.
    pub fn inner_distance(&self) -> f64 {
        self.t / (2.0 - self.t)
    }

    pub fn omega(&self, z: Complex64) -> Complex64 {
        1.0 / (ONE - z * (1.0 - self.t))
    }

    pub fn phi(&self, z: Complex64) -> Complex64 {
        self.omega(z) * self.t
    }

    /// `(2 Re z − (2−t)|z|² − t)/((1−t)|z|²)`.
    pub fn g(&self, z: Complex64) -> f64 {
        let t = self.t;
        let m = z.norm_sqr();
        (2.0 * z.re - (2.0 - t) * m - t) / ((1.0 - t) * m)
    }

    /// Nodes for `∫_{D_t} |f|^p |w|^{p−4} g_t^α dA/π`: `(w, weight, g_t(w))`.
    ///
    /// Polar about the origin, which `∂D_t` approaches as `t → 0`. With
    /// `c sin θ = R v` and `r = c cos θ + R√(1−v²) x`, the chord endpoints are
    /// `x = ±1`, `g_t = (2−t)R²(1−v²)(1−x²)/((1−t)r²)`, and all singular factors
    /// go into the weights.
    fn nodes(&self, alpha: f64, p: f64, level: usize, angular_level: usize) -> Result<Vec<(Complex64, f64, f64)>> {
        let (t, c, big_r) = (self.t, self.center, self.radius);
        let q = p - 3.0 - 2.0 * alpha;
        // as t → 0 the inner end sees (1+x)^α r^q ~ (1+x)^{α+q}; grade for that
        let chord = (alpha, generic_grading(alpha + q.min(0.0)));
        let x_rule = two_sided_with(-1.0, 1.0, chord, (alpha, grading(alpha)), level)?;
        let v_end = (alpha + 0.5, generic_grading(alpha + 0.5));
        let v_rule = two_sided_with(-1.0, 1.0, v_end, v_end, angular_level)?;
        let ratio = (2.0 - t) / (1.0 - t);
        let mut out = Vec::with_capacity(x_rule.len() * v_rule.len());
        for v in &v_rule.nodes {
            let one_minus_v2 = v.from_lo * v.to_hi;
            let half_chord = big_r * one_minus_v2.sqrt();
            let cc = (c * c - (big_r * v.x).powi(2)).sqrt();
            let dir = Complex64::new(cc, big_r * v.x) / c;
            let wv = v.weight * big_r / cc * big_r.powf(2.0 * alpha + 1.0) * ratio.powf(alpha) / PI;
            for x in &x_rule.nodes {
                // r − r_in = half_chord (1 + x) stays accurate near the inner edge
                let r_in = (t / (2.0 - t)) / (cc + half_chord);
                let r = r_in + half_chord * x.from_lo;
                let g = ratio * half_chord.powi(2) * x.from_lo * x.to_hi / (r * r);
                out.push((dir * r, wv * x.weight * r.powf(q), g));
            }
        }
        Ok(out)
    }

    /// Quadrature nodes of `D_t` used by [`comp_norm`].
    pub fn node_points(&self, alpha: f64, p: f64, level: usize, angular_level: usize) -> Result<Vec<Complex64>> {
        Ok(self.nodes(alpha, p, level, angular_level)?.into_iter().map(|n| n.0).collect())
    }

    /// `min g_t` over the nodes, both by the direct formula and the factored form.
    pub fn min_g(&self, alpha: f64, p: f64, level: usize, angular_level: usize) -> Result<(f64, f64)> {
        let nodes = self.nodes(alpha, p, level, angular_level)?;
        let direct = nodes.iter().map(|n| self.g(n.0)).fold(f64::INFINITY, f64::min);
        let factored = nodes.iter().map(|n| n.2).fold(f64::INFINITY, f64::min);
        Ok((direct, factored))
    }
}

fn dt_integral<F: AnalyticFn + ?Sized>(
    f: &F,
    params: SpaceParams,
    data: &CompositionData,
    level: usize,
    angular_level: usize,
) -> Result<f64> {
    let nodes = data.nodes(params.alpha, params.p, level, angular_level)?;
    let p = params.p;
    let parts: Vec<Result<f64>> = nodes
        .par_chunks(512)
        .map(|chunk| {
            let mut acc = 0.0;
            for &(z, weight, g) in chunk {
                if !(g > 0.0) {
                    return Err(Error::Internal(format!(
                        "g_t = {g:e} at node {z} outside D_t (t = {})",
                        data.t
                    )));
                }
                acc += weight * f.value(z).norm().powf(p);
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0.0;
    for part in parts {
        total += part?;
    }
    Ok((params.alpha + 1.0) * total)
}

/// `‖T_t f‖_{A^p_α}` through the change of variables onto `D_t`.
pub fn comp_norm<F: AnalyticFn + ?Sized>(
    f: &F,
    params: SpaceParams,
    t: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    params.require_bounded()?;
    let data = CompositionData::new(t)?;
    let a = params.critical_exponent();
    let level = scheme.radial_level;
    let angular = level_for(scheme.angular_count / 2);
    let coarse = dt_integral(f, params, &data, level, angular)?;
    let fine = dt_integral(f, params, &data, level + 1, angular + 1)?;
    let change = (fine - coarse).abs();
    if !(change <= scheme.rel_tol * fine.abs()) {
        return Err(Error::NonConvergence {
            what: format!("D_t integral at t = {t}"),
            nodes: 1 << (level + angular + 4),
            last_change: change,
        });
    }
    Ok(t.powf(a - 1.0) * (1.0 - t).powf(-a) * fine.powf(1.0 / params.p))
}

/// `∫_0^1 ‖T_t f‖ dt`, the right-hand side of the Minkowski bound for `‖H f‖`.
///
/// The `t^{a−1}` end is graded; `‖T_t f‖ t^{1−a}` stays smooth up to `t = 1`.
pub fn composition_norm_integral<F: AnalyticFn + ?Sized>(
    f: &F,
    params: SpaceParams,
    scheme: &QuadratureScheme,
    rel_tol: f64,
) -> Result<Converged<f64>> {
    params.require_bounded()?;
    let a = params.critical_exponent();
    converge("Minkowski t-integral", 3, 8, Tolerance::new(0.0, rel_tol), |level| {
        let rule = graded(0.0, 1.0, 0.0, a - 1.0, level)?;
        let mut acc = 0.0;
        for n in &rule.nodes {
            acc += n.weight * comp_norm(f, params, n.x, scheme)? * n.x.powf(1.0 - a);
        }
        Ok(acc)
    })
}

/// `K_{p,α}(t) = 2(α+1) ∫_{t/(2−t)}^1 (1 − r² − (1−r)²/(1−t))^α r^{p−3−2α} M_p^p(r,f) dr`.
///
/// The bracket equals `(2−t)/(1−t) · (1−r)(r − t/(2−t))`, so both ends carry
/// the exponent `α`; at `t = 0` the lower end merges with `r^{p−3−2α}`.
pub fn k_func<F: AnalyticFn + ?Sized>(
    f: &F,
    params: SpaceParams,
    t: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    params.require_bounded()?;
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("K needs t in [0, 1], got {t}"));
    }
    if t == 1.0 {
        return Ok(0.0);
    }
    let (p, alpha) = (params.p, params.alpha);
    let lo = t / (2.0 - t);
    let factor = ((2.0 - t) / (1.0 - t)).powf(alpha);
    let k = scheme.angular_count;
    let value = converge("K integral", 5, 11, Tolerance::new(0.0, scheme.rel_tol), |level| {
        let half_from_zero = t == 0.0;
        let e_lo = if half_from_zero { p - 3.0 - alpha } else { alpha };
        let rule = two_sided(lo, 1.0, e_lo, alpha, level)?;
        Ok(rule.integrate(|n| {
            let r = n.x;
            let radial = if half_from_zero { 1.0 } else { r.powf(p - 3.0 - 2.0 * alpha) };
            radial * mean_pow(f, r, n.to_hi, p, k)
        }))
    })?;
    Ok(2.0 * (alpha + 1.0) * factor * value.value)
}

/// `J_{p,α} = 2(α+1) ∫_0^1 M_p^p(r,f) (1−r²)^α r dr`, integrated in `r`
/// independently of the `u = r²` rule behind [`crate::quadrature::bergman_norm`].
pub fn j_func<F: AnalyticFn + ?Sized>(f: &F, params: SpaceParams, scheme: &QuadratureScheme) -> Result<f64> {
    let (p, alpha) = (params.p, params.alpha);
    let k = scheme.angular_count;
    let value = converge("J integral", 5, 12, Tolerance::new(0.0, scheme.rel_tol), |level| {
        let rule = graded(0.0, 1.0, 1.0, alpha, level)?;
        let parts: Vec<f64> = rule
            .nodes
            .par_iter()
            .map(|n| n.weight * (1.0 + n.x).powf(alpha) * n.x * mean_pow(f, n.x, n.to_hi, p, k))
            .collect();
        Ok(parts.iter().sum::<f64>())
    })?;
    Ok(2.0 * (alpha + 1.0) * value.value)
}
