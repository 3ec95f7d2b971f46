//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see them.

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use hilbert_bergman::hilbert::{apply_coeff, apply_integral, composition_norm_integral, image_norm_pow};
use hilbert_bergman::region::{
    alpha0_bracket, alpha_bounds, classify, cubic_threshold, dai_condition, discriminant_k, grid, p1, p3, phi,
    phi_root, quartic_condition, region_sanity, Settlement,
};
use hilbert_bergman::verification::{ascend_norm, lower_bound_ratio, sample_in_region, verify_lemma, AscentOptions};
use hilbert_bergman::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!("{} criterion {id:>2} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn params(p: f64, alpha: f64) -> SpaceParams {
    SpaceParams::new(p, alpha).unwrap()
}

#[test]
fn criterion_01_norm_reproduction() {
    let mut ok = true;
    let mut detail = Vec::new();
    for (p, alpha) in [(4.0, 0.0), (6.0, 0.0), (5.0, 1.0), (17.0, 9.0)] {
        let pr = params(p, alpha);
        let start = Instant::now();
        let spec = TestFunctionSpec::with_degree(0.99 * pr.critical_exponent(), 2048);
        let lb = lower_bound_ratio(pr, spec).unwrap();
        let elapsed = start.elapsed();
        let point_ok = lb.ratio >= 0.95 * lb.target
            && lb.ratio <= lb.target + lb.quad_error_budget
            && lb.quad_error_budget <= 1e-3
            && elapsed <= Duration::from_secs(120);
        ok &= point_ok;
        detail.push(format!(
            "({p},{alpha}) ratio/target={:.5} budget={:.1e} {:.1}s",
            lb.ratio / lb.target,
            lb.quad_error_budget,
            elapsed.as_secs_f64()
        ));
    }
    report(1, "norm value reproduction", ok, detail.join("; "));
}

#[test]
fn criterion_02_ascent_consistency() {
    let pr = params(4.0, 0.0);
    let start = Instant::now();
    let est = ascend_norm(pr, 64, 300, 20240607, &AscentOptions::for_problem(pr, 64)).unwrap();
    let elapsed = start.elapsed();
    let monotone = est.trace.windows(2).all(|w| w[1].1 >= w[0].1);
    let reaches = est.lower_bound >= 0.95 * PI;
    let bounded = est.lower_bound <= PI + est.quad_error_budget;
    let ok = reaches && bounded && monotone && elapsed <= Duration::from_secs(300);
    report(
        2,
        "ascent consistency",
        ok,
        format!(
            "lower_bound/pi={:.5} (needs >= 0.95) budget={:.1e} monotone={monotone} converged={} {:.1}s",
            est.lower_bound / PI,
            est.quad_error_budget,
            est.converged,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_03_beta_identity() {
    let worst = [0.1, 0.25, 0.5, 0.647, 0.9]
        .iter()
        .map(|&a| (beta_partial(1.0, a).unwrap() - PI / (PI * a).sin()).abs())
        .fold(0.0, f64::max);
    report(3, "beta identity", worst <= 1e-10, format!("max error {worst:.2e}"));
}

#[test]
fn criterion_04_lemma_verification() {
    let start = Instant::now();
    let samples = sample_in_region(100, 4242, 1.5, 50.0).unwrap();
    let reports: Vec<_> = samples.iter().map(|&pr| verify_lemma(pr, 10_000).unwrap()).collect();
    let elapsed = start.elapsed();
    let failures: Vec<_> = reports.iter().filter(|r| r.passed != Some(true)).collect();
    let worst_f = reports.iter().map(|r| r.max_f / r.f_tolerance).fold(f64::NEG_INFINITY, f64::max);
    let min_k = reports.iter().map(|r| r.min_k).fold(f64::INFINITY, f64::min);
    let min_dg = reports.iter().map(|r| r.min_g_increment).fold(f64::INFINITY, f64::min);
    let ok = failures.is_empty() && elapsed <= Duration::from_secs(120);
    report(
        4,
        "lemma verification",
        ok,
        format!(
            "{} samples, {} failing, max F/tol={worst_f:.2e}, min k={min_k:.2e}, min dg={min_dg:.2e}, {:.1}s",
            reports.len(),
            failures.len(),
            elapsed.as_secs_f64()
        ),
    );
}

/// Roots of `α ↦ quartic(p, α)` by scan and bisection, independent of the closed form.
fn quartic_roots(p: f64) -> Vec<f64> {
    let q = |a: f64| quartic_condition(p, a);
    let (lo, hi, n) = (-50.0, 4.0 * p + 50.0, 20_000);
    let mut roots = Vec::new();
    let mut prev = lo;
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        if q(prev).signum() != q(x).signum() {
            let (mut a, mut b) = (prev, x);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if q(a).signum() == q(m).signum() {
                    a = m
                } else {
                    b = m
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = x;
    }
    roots
}

#[test]
fn criterion_05_algebraic_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    let mut checked = 0;
    while checked < 10_000 {
        let p = rng.random_range(1.01..60.0);
        let alpha = rng.random_range(-0.99..60.0);
        let Ok(d) = discriminant_k(p, alpha) else { continue };
        checked += 1;
        let q = quartic_condition(p, alpha);
        if q.abs() > 1e-9 * (1.0 + p.powi(4)) && (d > 0.0) != (q > 0.0) {
            mismatches += 1;
        }
    }
    let mut worst_rel: f64 = 0.0;
    for i in 0..=100 {
        let p = 1.5 + 0.485 * i as f64;
        let Ok(b) = alpha_bounds(p) else { continue };
        let roots = quartic_roots(p);
        for bound in [b.low, b.up] {
            let nearest = roots
                .iter()
                .map(|r| (r - bound).abs() / bound.abs().max(1.0))
                .fold(f64::INFINITY, f64::min);
            worst_rel = worst_rel.max(nearest);
        }
    }
    report(
        5,
        "algebraic equivalences",
        mismatches == 0 && worst_rel <= 1e-9,
        format!("{mismatches} sign mismatches in {checked}; worst root deviation {worst_rel:.2e}"),
    );
}

#[test]
fn criterion_06_classification() {
    let a = classify(17.0, 9.0);
    let b = classify(20.0, 9.0);
    let ok = a.settled_by(Settlement::Prop21)
        && !a.settled_by(Settlement::Prop31)
        && b.settled_by(Settlement::Prop31)
        && !b.settled_by(Settlement::Prop21)
        && a.settled_by(Settlement::Thm41)
        && b.settled_by(Settlement::Thm41);
    report(
        6,
        "classification at (17,9) and (20,9)",
        ok,
        format!("(17,9) {:?}; (20,9) {:?}", a.settled_labels(), b.settled_labels()),
    );
}

#[test]
fn criterion_07_curve_comparisons() {
    let root = phi_root(1.0).unwrap();
    let (lo, hi) = (3.0 + 6f64.sqrt(), 3.0 + (9.0 - (SQRT_2 - 0.5) * 3.0).sqrt());
    let root_ok = root > lo && root < hi && phi(1.0, root).abs() <= 1e-10;
    let ordered = (1..=2000).all(|i| {
        let a = i as f64 * 0.01;
        p3(a) < p1(a)
    });
    // sign change of p3(α) − (lower α₀ bracket), located by bisection
    let h = |a: f64| p3(a) - alpha0_bracket(a).0;
    let (mut a, mut b) = (0.05, 2.0);
    let flips = h(a).signum() != h(b).signum();
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if h(a).signum() == h(m).signum() {
            a = m
        } else {
            b = m
        }
    }
    let flip = 0.5 * (a + b);
    let flip_ok = flips && (flip - cubic_threshold()).abs() <= 1e-6;
    report(
        7,
        "curve comparisons",
        root_ok && ordered && flip_ok,
        format!(
            "alpha0(1)={root:.8} in ({lo:.5},{hi:.5}); p3<p1 on grid: {ordered}; flip at {flip:.9} vs {:.9}",
            cubic_threshold()
        ),
    );
}

#[test]
fn criterion_08_double_integral_condition() {
    let check = dai_condition(params(4.0, 0.0)).unwrap();
    let closed = (PI - beta(4.5, 0.5).unwrap()) / 2.0;
    let err = (check.lhs - closed).abs();
    report(
        8,
        "double-integral condition at (4,0)",
        err <= 1e-6 && check.holds,
        format!("lhs={:.8} closed={closed:.8} err={err:.1e} rhs={:.8} holds={}", check.lhs, check.rhs, check.holds),
    );
}

#[test]
fn criterion_09_operator_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut polys = Vec::new();
    for _ in 0..50 {
        let degree = rng.random_range(0..=20);
        let f = PowerSeries::new(
            (0..=degree)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        );
        let z = Complex64::from_polar(rng.random_range(0.0..0.9f64).sqrt() * 0.9f64.sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        let image = apply_coeff(&f, 400);
        let coeff = image.series.eval(z).unwrap();
        let integral = apply_integral(&f, z).unwrap();
        worst = worst.max((coeff - integral).norm() - image.truncation_error(z));
        polys.push(f);
    }
    // Minkowski: ‖Hf‖ ≤ ∫_0^1 ‖T_t f‖ dt
    let mut mink_worst = f64::NEG_INFINITY;
    let cases = [(4.0, 0.0), (5.0, 1.0), (3.0, 0.5)];
    for (i, &(p, alpha)) in cases.iter().enumerate() {
        let pr = params(p, alpha);
        let f = PowerSeries::from_real(&[1.0, 0.5, 0.25 * (i as f64 + 1.0), -0.1]);
        let lhs = image_norm_pow(&f, pr, 1e-10).unwrap().value.powf(1.0 / p);
        let scheme = QuadratureScheme::new(alpha, 6, 128).unwrap().with_rel_tol(1e-8);
        let rhs = composition_norm_integral(&f, pr, &scheme, 1e-9).unwrap().value;
        mink_worst = mink_worst.max(lhs - rhs);
    }
    report(
        9,
        "operator identity and Minkowski bound",
        worst <= 1e-8 && mink_worst <= 1e-6,
        format!("max |coeff - integral| {worst:.2e}; max |Hf| - bound {mink_worst:.2e} (allowed 1e-6)"),
    );
}

#[test]
fn criterion_10_region_sanity() {
    let ps = grid(1.5, 50.0, 0.01).unwrap();
    let violations = region_sanity(&ps);
    let detail = match violations.first() {
        None => format!("{} grid points, no violations", ps.len()),
        Some(v) => format!("{} violations, first at p={} ({})", violations.len(), v.p, v.relation),
    };
    report(10, "region sanity", violations.is_empty(), detail);
}
