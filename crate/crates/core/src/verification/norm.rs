//! Lower bounds for the operator norm: the `(1 − z)^{−γ}` family and a
//! multi-start coordinate ascent over nonnegative Taylor coefficients.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{binomial_coeffs, AnalyticFn, Binomial, PowerSeries, TestFunctionSpec};
use crate::error::{domain, Result};
use crate::hilbert::{apply_coeff, monomial_images, BinomialImage};
use crate::params::SpaceParams;
use crate::quadrature::boundary::{integrate_about_one, BoundaryScheme, DiskNode};
use crate::quadrature::rule::Tolerance;
use crate::quadrature::{bergman_integral, QuadratureScheme};
use crate::special::{beta, ln_gamma, target_norm};

/// `‖(1 − z)^{−γ}‖^p_{A^p_α} = (α+1) B(α+2−pγ, α+1) Γ(κ+1)/Γ(κ/2+1)²`, `κ = 2α + 2 − pγ`.
pub fn test_function_norm_pow(params: SpaceParams, gamma: f64) -> Result<f64> {
    let (p, alpha) = (params.p, params.alpha);
    let lambda = p * gamma;
    if !(lambda < alpha + 2.0) {
        return domain(format!(
            "(1-z)^-{gamma} is not in A^{p}_{alpha}: needs p*gamma < alpha + 2"
        ));
    }
    let kappa = 2.0 * alpha + 2.0 - lambda;
    Ok((alpha + 1.0)
        * beta(alpha + 2.0 - lambda, alpha + 1.0)?
        * (ln_gamma(kappa + 1.0) - 2.0 * ln_gamma(0.5 * kappa + 1.0)).exp())
}

/// One evaluation of `‖H f_γ‖ / ‖f_γ‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub params: SpaceParams,
    pub spec: TestFunctionSpec,
    pub ratio: f64,
    pub target: f64,
    /// `1 − ratio/target`.
    pub deficit: f64,
    pub norm_pow_f: f64,
    pub norm_pow_image: f64,
    pub quad_error_budget: f64,
    /// Largest `|S_N(z) − f_γ(z)|` over sample points with `|z| ≤ 0.9`,
    /// `S_N` the degree-`N` Taylor polynomial.
    pub series_residual: f64,
    pub level: usize,
}

/// Relative doubling tolerance for `‖H f_γ‖^p`.
pub const LOWER_BOUND_REL_TOL: f64 = 1e-9;

/// `‖H f_γ‖ / ‖f_γ‖` for the untruncated `f_γ = (1 − z)^{−γ}`, `0 ≤ γ < (α+2)/p`.
///
/// `‖f_γ‖` is closed form. `‖H f_γ‖^p = ∫ |1−z|^{−pγ} |(1−z)^γ H f_γ|^p dm_α`
/// is integrated about `z = 1` with the singular factor in the weights.
/// The degree only enters the reported residual of the Taylor polynomial.
pub fn lower_bound_ratio(params: SpaceParams, spec: TestFunctionSpec) -> Result<LowerBound> {
    params.require_bounded()?;
    let a = params.critical_exponent();
    let gamma = spec.gamma;
    if !(gamma >= 0.0 && gamma < a) {
        return domain(format!(
            "gamma must satisfy 0 <= gamma < (alpha+2)/p = {a}, got {gamma}"
        ));
    }
    let p = params.p;
    let target = target_norm(params)?;
    let norm_pow_f = test_function_norm_pow(params, gamma)?;
    let image = BinomialImage::new(gamma)?;
    let lambda = p * gamma;
    let integral = integrate_about_one(
        params.alpha,
        lambda,
        4,
        10,
        Tolerance::new(0.0, LOWER_BOUND_REL_TOL),
        |n: &DiskNode| image.scaled(n.z, n.w).norm().powf(p),
    )?;
    let norm_pow_image = integral.value;
    let ratio = (norm_pow_image / norm_pow_f).powf(1.0 / p);
    let quad_error_budget = ratio * (integral.change / norm_pow_image) / p + 4.0 * f64::EPSILON * ratio;
    Ok(LowerBound {
        params,
        spec,
        ratio,
        target,
        deficit: 1.0 - ratio / target,
        norm_pow_f,
        norm_pow_image,
        quad_error_budget,
        series_residual: series_residual(spec),
        level: integral.level,
    })
}

fn series_residual(spec: TestFunctionSpec) -> f64 {
    let s = spec.series();
    let f = Binomial { gamma: spec.gamma };
    let mut worst: f64 = 0.0;
    for r in [0.5, 0.9] {
        for j in 0..16 {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / 16.0);
            worst = worst.max((s.horner(z) - f.value(z)).norm());
        }
    }
    worst
}

/// The ratio for the Taylor polynomial itself: `‖H S_N‖ / ‖S_N‖`, with `H S_N`
/// truncated at `out_degree` and both norms by origin-centred quadrature.
///
/// Kept as a diagnostic: the deficit decays only logarithmically in `N`.
pub fn truncated_ratio(
    params: SpaceParams,
    spec: TestFunctionSpec,
    out_degree: usize,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    params.require_bounded()?;
    let f = spec.series();
    let hf = apply_coeff(&f, out_degree).series;
    let num = bergman_integral(&hf, params, scheme)?;
    let den = bergman_integral(&f, params, scheme)?;
    Ok((num / den).powf(1.0 / params.p))
}

/// What realises a lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Achiever {
    Coefficients(Vec<f64>),
    TestFunction(TestFunctionSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub params: SpaceParams,
    pub method: String,
    pub lower_bound: f64,
    pub target: f64,
    pub achiever: Achiever,
    /// `(iteration, ratio)`; nondecreasing for the ascent.
    pub trace: Vec<(usize, f64)>,
    pub quad_error_budget: f64,
    pub converged: bool,
}

impl NormEstimate {
    /// The conjectured value is never exceeded beyond the quadrature budget.
    pub fn consistent_with_target(&self) -> bool {
        self.lower_bound <= self.target + self.quad_error_budget
    }
}

/// Lower bounds along `γ = θ (α+2)/p` for each fraction `θ`; the best one is reported.
pub fn ladder_estimate(params: SpaceParams, fractions: &[f64], degree: usize) -> Result<(NormEstimate, Vec<LowerBound>)> {
    params.require_bounded()?;
    let a = params.critical_exponent();
    let runs: Vec<LowerBound> = fractions
        .iter()
        .map(|&t| lower_bound_ratio(params, TestFunctionSpec::with_degree(t * a, degree)))
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .max_by(|x, y| x.ratio.total_cmp(&y.ratio))
        .ok_or_else(|| crate::error::Error::Domain("empty gamma ladder".into()))?;
    let est = NormEstimate {
        params,
        method: "test_function".into(),
        lower_bound: best.ratio,
        target: best.target,
        achiever: Achiever::TestFunction(best.spec),
        trace: runs.iter().enumerate().map(|(i, r)| (i, r.ratio)).collect(),
        quad_error_budget: best.quad_error_budget,
        converged: true,
    };
    Ok((est, runs))
}

/// Controls for [`ascend_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    /// Gauss level of each half of the `s` rule of the boundary scheme.
    pub level: usize,
    /// Gauss level of each half of its angular rule.
    pub angular_level: usize,
    /// Random starts in addition to the binomial warm start.
    pub random_starts: usize,
    /// Relative finite-difference step.
    pub fd_step: f64,
    /// Relative improvement per iteration below which a start is converged.
    pub stall_tol: f64,
}

impl AscentOptions {
    pub fn for_problem(params: SpaceParams, n_coeffs: usize) -> Self {
        let work = (params.p * n_coeffs as f64 / 2.0).max(8.0) as usize;
        let level = crate::quadrature::gauss::level_for(work).clamp(4, 6);
        Self {
            level,
            angular_level: level + 1,
            random_starts: 8,
            fd_step: 1e-6,
            stall_tol: 1e-10,
        }
    }
}

/// Node data for evaluating `‖f_a‖^p` and `‖H f_a‖^p` for any coefficient vector.
struct Basis {
    n: usize,
    p: f64,
    weights: Vec<f64>,
    /// `z_j^k` stored column-major: index `k * nodes + j`.
    powers: Vec<Complex64>,
    /// `q_k(z_j)`, same layout.
    images: Vec<Complex64>,
}

impl Basis {
    fn new(params: SpaceParams, n: usize, level: usize, angular_level: usize) -> Result<Self> {
        let scheme = BoundaryScheme::with_levels(params.alpha, 0.0, level, angular_level)?;
        let m = scheme.nodes.len();
        let per_node: Vec<Result<(Vec<Complex64>, Vec<Complex64>)>> = scheme
            .nodes
            .par_iter()
            .map(|nd| {
                let mut pw = Vec::with_capacity(n);
                let mut zk = Complex64::new(1.0, 0.0);
                for _ in 0..n {
                    pw.push(zk);
                    zk *= nd.z;
                }
                Ok((pw, monomial_images(nd.z, nd.w, n)?))
            })
            .collect();
        let mut powers = vec![Complex64::new(0.0, 0.0); m * n];
        let mut images = vec![Complex64::new(0.0, 0.0); m * n];
        for (j, item) in per_node.into_iter().enumerate() {
            let (pw, q) = item?;
            for k in 0..n {
                powers[k * m + j] = pw[k];
                images[k * m + j] = q[k];
            }
        }
        Ok(Self {
            n,
            p: params.p,
            weights: scheme.nodes.iter().map(|nd| nd.weight).collect(),
            powers,
            images,
        })
    }

    fn nodes(&self) -> usize {
        self.weights.len()
    }

    fn fields(&self, a: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let m = self.nodes();
        let mut f = vec![Complex64::new(0.0, 0.0); m];
        let mut g = vec![Complex64::new(0.0, 0.0); m];
        for (k, &ak) in a.iter().enumerate().take(self.n) {
            if ak == 0.0 {
                continue;
            }
            let pw = &self.powers[k * m..(k + 1) * m];
            let im = &self.images[k * m..(k + 1) * m];
            for j in 0..m {
                f[j] += pw[j] * ak;
                g[j] += im[j] * ak;
            }
        }
        (f, g)
    }

    fn sums(&self, f: &[Complex64], g: &[Complex64]) -> (f64, f64) {
        let half = 0.5 * self.p;
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..self.nodes() {
            let w = self.weights[j];
            num += w * g[j].norm_sqr().powf(half);
            den += w * f[j].norm_sqr().powf(half);
        }
        (num, den)
    }

    /// Sums after moving coordinate `k` by `h`, without materialising the fields.
    fn shifted_sums(&self, f: &[Complex64], g: &[Complex64], k: usize, h: f64) -> (f64, f64) {
        let m = self.nodes();
        let half = 0.5 * self.p;
        let pw = &self.powers[k * m..(k + 1) * m];
        let im = &self.images[k * m..(k + 1) * m];
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..m {
            let w = self.weights[j];
            num += w * (g[j] + im[j] * h).norm_sqr().powf(half);
            den += w * (f[j] + pw[j] * h).norm_sqr().powf(half);
        }
        (num, den)
    }

    fn ratio_of(&self, sums: (f64, f64)) -> f64 {
        (sums.0 / sums.1).powf(1.0 / self.p)
    }

    fn ratio(&self, a: &[f64]) -> f64 {
        let (f, g) = self.fields(a);
        self.ratio_of(self.sums(&f, &g))
    }
}

struct StartResult {
    coeffs: Vec<f64>,
    ratio: f64,
    trace: Vec<(usize, f64)>,
    converged: bool,
}

fn ascend_from(basis: &Basis, mut a: Vec<f64>, iterations: usize, opts: &AscentOptions) -> StartResult {
    let n = basis.n;
    let (mut f, mut g) = basis.fields(&a);
    let normalise = |a: &mut Vec<f64>, f: &mut Vec<Complex64>, g: &mut Vec<Complex64>| {
        let den = basis.sums(f, g).1;
        let scale = den.powf(-1.0 / basis.p);
        if scale.is_finite() && scale > 0.0 {
            a.iter_mut().for_each(|x| *x *= scale);
            f.iter_mut().for_each(|x| *x *= scale);
            g.iter_mut().for_each(|x| *x *= scale);
        }
    };
    normalise(&mut a, &mut f, &mut g);
    let mut ratio = basis.ratio_of(basis.sums(&f, &g));
    let mut trace = vec![(0, ratio)];
    let mut converged = false;
    for it in 1..=iterations {
        let start = ratio;
        let previous = a.clone();
        let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let h = opts.fd_step * scale;
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            let up = basis.ratio_of(basis.shifted_sums(&f, &g, k, h));
            // one-sided at the constraint
            let (d1, d2) = if a[k] >= h {
                let down = basis.ratio_of(basis.shifted_sums(&f, &g, k, -h));
                ((up - down) / (2.0 * h), (up - 2.0 * ratio + down) / (h * h))
            } else {
                ((up - ratio) / h, 0.0)
            };
            if d1 == 0.0 || (d1 < 0.0 && a[k] == 0.0) {
                continue;
            }
            // 1-D Newton step when the section is concave, else a trust step
            let mut delta = if d2 < 0.0 { -d1 / d2 } else { 0.1 * scale * d1.signum() };
            delta = delta.clamp(-scale, scale);
            for _ in 0..30 {
                let moved = (a[k] + delta).max(0.0);
                let step = moved - a[k];
                if step == 0.0 {
                    break;
                }
                let r = basis.ratio_of(basis.shifted_sums(&f, &g, k, step));
                if r > ratio {
                    let m = basis.nodes();
                    let pw = &basis.powers[k * m..(k + 1) * m];
                    let im = &basis.images[k * m..(k + 1) * m];
                    for j in 0..m {
                        f[j] += pw[j] * step;
                        g[j] += im[j] * step;
                    }
                    a[k] = moved;
                    ratio = r;
                    break;
                }
                delta *= 0.5;
            }
        }
        // refresh the fields to shed accumulated rounding, keeping the trace monotone
        let (mut f2, mut g2) = basis.fields(&a);
        normalise(&mut a, &mut f2, &mut g2);
        let fresh = basis.ratio_of(basis.sums(&f2, &g2));
        if fresh <= start {
            // the sweep gained nothing beyond rounding
            a = previous;
            converged = true;
            break;
        }
        f = f2;
        g = g2;
        ratio = fresh;
        trace.push((it, ratio));
        if ratio - start <= opts.stall_tol * start {
            converged = true;
            break;
        }
    }
    StartResult {
        coeffs: a,
        ratio,
        trace,
        converged,
    }
}

/// Maximises `‖H f_a‖ / ‖f_a‖` over nonnegative coefficient vectors of length
/// `n_coeffs` by normalised coordinate ascent: each coordinate takes a finite-difference
/// Newton step, clamped at 0 and halved until the ratio improves.
///
/// Starts: the Taylor coefficients of `(1 − z)^{−0.99(α+2)/p}` and
/// `random_starts` seeded uniform vectors, run in parallel. The best achiever
/// is re-evaluated on the refined scheme; the difference is the budget.
pub fn ascend_norm(
    params: SpaceParams,
    n_coeffs: usize,
    iterations: usize,
    seed: u64,
    opts: &AscentOptions,
) -> Result<NormEstimate> {
    params.require_bounded()?;
    if n_coeffs == 0 {
        return domain("n_coeffs must be at least 1");
    }
    let target = target_norm(params)?;
    let basis = Basis::new(params, n_coeffs, opts.level, opts.angular_level)?;
    let warm = binomial_coeffs(0.99 * params.critical_exponent(), n_coeffs - 1);
    let mut starts = vec![warm];
    for i in 0..opts.random_starts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i as u64 + 1)));
        starts.push((0..n_coeffs).map(|_| rng.random_range(0.0..1.0)).collect());
    }
    let results: Vec<StartResult> = starts
        .into_par_iter()
        .map(|a| ascend_from(&basis, a, iterations, opts))
        .collect();
    let best = results
        .into_iter()
        .reduce(|x, y| if y.ratio > x.ratio { y } else { x })
        .expect("at least one start");
    let fine = Basis::new(params, n_coeffs, opts.level + 1, opts.angular_level + 1)?;
    let fine_ratio = fine.ratio(&best.coeffs);
    let budget = (fine_ratio - best.ratio).abs() + 4.0 * f64::EPSILON * fine_ratio;
    Ok(NormEstimate {
        params,
        method: "coordinate_ascent".into(),
        lower_bound: fine_ratio,
        target,
        achiever: Achiever::Coefficients(best.coeffs),
        trace: best.trace,
        quad_error_budget: budget,
        converged: best.converged,
    })
}

/// `‖f‖` for a coefficient achiever, for cross-checks against origin-centred quadrature.
pub fn achiever_series(est: &NormEstimate) -> Option<PowerSeries> {
    match &est.achiever {
        Achiever::Coefficients(c) => Some(PowerSeries::from_real(c)),
        Achiever::TestFunction(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::boundary::BoundaryScheme;

    fn params(p: f64, a: f64) -> SpaceParams {
        SpaceParams::new(p, a).unwrap()
    }

    /// For `p = 2m`, `‖f_γ‖^p_{A^p_α} = ‖f_{mγ}‖²_{A²_α} = Σ c_n(mγ)² (α+1) B(n+1, α+1)`.
    fn even_p_series(m: usize, alpha: f64, gamma: f64, terms: usize) -> f64 {
        let g = m as f64 * gamma;
        let mut c = 1.0;
        let mut b = 1.0 / (alpha + 1.0);
        let mut sum = 0.0;
        for n in 0..terms {
            sum += c * c * (alpha + 1.0) * b;
            let nf = n as f64;
            c *= (g + nf) / (nf + 1.0);
            b *= (nf + 1.0) / (nf + alpha + 2.0);
        }
        sum
    }

    #[test]
    fn closed_form_norm_matches_coefficient_series() {
        for (m, alpha, gamma) in [(1usize, 3.0, 0.5), (2, 2.0, 0.3), (3, 4.0, 0.2)] {
            let p = 2.0 * m as f64;
            let exact = test_function_norm_pow(params(p, alpha), gamma).unwrap();
            let series = even_p_series(m, alpha, gamma, 2_000_000);
            assert!((series / exact - 1.0).abs() < 1e-9, "({p},{alpha},{gamma}): {series} vs {exact}");
        }
        assert!(test_function_norm_pow(params(4.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn closed_form_norm_matches_boundary_quadrature() {
        let (p, alpha, gamma) = (5.0, 1.0, 0.5);
        let exact = test_function_norm_pow(params(p, alpha), gamma).unwrap();
        let q = BoundaryScheme::new(alpha, 0.0, 8)
            .unwrap()
            .integrate(|n| Binomial { gamma }.eval_at(n.z, n.w).norm().powf(p));
        assert!((q / exact - 1.0).abs() < 1e-8, "{q} vs {exact}");
    }

    #[test]
    fn constant_function_ratio() {
        let lb = lower_bound_ratio(params(4.0, 0.0), TestFunctionSpec::new(0.0)).unwrap();
        assert!(lb.ratio > 0.0 && lb.ratio < lb.target);
        assert!((lb.norm_pow_f - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_gamma_at_threshold() {
        assert!(lower_bound_ratio(params(4.0, 0.0), TestFunctionSpec::new(0.5)).is_err());
        assert!(lower_bound_ratio(params(3.0, 2.0), TestFunctionSpec::new(0.1)).is_err());
    }

    #[test]
    fn one_coefficient_ascent_is_the_constant() {
        let pr = params(4.0, 0.0);
        let est = ascend_norm(pr, 1, 5, 1, &AscentOptions::for_problem(pr, 1)).unwrap();
        let lb = lower_bound_ratio(pr, TestFunctionSpec::new(0.0)).unwrap();
        assert!((est.lower_bound - lb.ratio).abs() < 1e-6 + est.quad_error_budget, "{} vs {}", est.lower_bound, lb.ratio);
    }
}
