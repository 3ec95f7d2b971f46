use std::f64::consts::PI;

use hilbert_bergman::hilbert::{apply_coeff, apply_integral, monomial_images, BinomialImage};
use hilbert_bergman::region::{alpha_up, classify, discriminant_k, quartic_condition, Settlement};
use hilbert_bergman::verification::lower_bound_ratio;
use hilbert_bergman::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn series(re: &[f64], im: &[f64]) -> PowerSeries {
    PowerSeries::new(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

fn coeffs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0f64..2.0, n),
            prop::collection::vec(-2.0f64..2.0, n),
        )
    })
}

fn disk_point() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.9, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_is_linear((a_re, a_im) in coeffs(), (b_re, b_im) in coeffs(), c in -3.0f64..3.0, z in disk_point()) {
        let (f, g) = (series(&a_re, &a_im), series(&b_re, &b_im));
        let lhs = f.scale(Complex64::new(c, 0.0)).add(&g).eval(z).unwrap();
        let rhs = f.eval(z).unwrap() * c + g.eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn coefficient_operator_is_linear((a_re, a_im) in coeffs(), (b_re, b_im) in coeffs(), c in -3.0f64..3.0) {
        let (f, g) = (series(&a_re, &a_im), series(&b_re, &b_im));
        let lhs = apply_coeff(&f.scale(Complex64::new(c, 0.0)).add(&g), 15).series;
        let hf = apply_coeff(&f, 15).series;
        let hg = apply_coeff(&g, 15).series;
        for n in 0..=15 {
            let want = hf.coeffs[n] * c + hg.coeffs[n];
            prop_assert!((lhs.coeffs[n] - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    /// `H(z^k)` against the oracle `Σ_n z^n/(n+k+1)`.
    #[test]
    fn monomial_images_match_series(n in 1usize..40, r in 0.0f64..0.6, t in 0.0f64..std::f64::consts::TAU) {
        let z = Complex64::from_polar(r, t);
        let q = monomial_images(z, Complex64::new(1.0, 0.0) - z, n).unwrap();
        for (k, qk) in q.iter().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            let mut zn = Complex64::new(1.0, 0.0);
            for m in 0..400 {
                sum += zn / (m + k + 1) as f64;
                zn *= z;
            }
            prop_assert!((qk - sum).norm() <= 1e-12, "k={} {} vs {}", k, qk, sum);
        }
    }

    #[test]
    fn binomial_image_routes_agree(gamma in 0.05f64..0.95, r in 0.05f64..0.95, t in -3.1f64..3.1) {
        let z = Complex64::from_polar(r, t);
        let w = Complex64::new(1.0, 0.0) - z;
        let img = BinomialImage::new(gamma).unwrap();
        let direct = apply_integral(&TestFunctionSpec::new(gamma).closed_form(), z).unwrap();
        let closed = img.eval_at(z, w);
        prop_assert!((direct - closed).norm() <= 1e-9 * (1.0 + direct.norm()), "{} vs {}", direct, closed);
    }

    #[test]
    fn bergman_norm_is_homogeneous((a_re, a_im) in coeffs(), c in 0.1f64..10.0, p in 1.2f64..6.0, alpha in -0.5f64..3.0) {
        let f = series(&a_re, &a_im);
        let scheme = QuadratureScheme::new(alpha, 6, 64).unwrap();
        let n1 = hilbert_bergman::quadrature::bergman_integral_on(&f, p, &scheme).powf(1.0 / p);
        let n2 = hilbert_bergman::quadrature::bergman_integral_on(&f.scale(Complex64::new(0.0, c)), p, &scheme).powf(1.0 / p);
        prop_assert!((n2 - c * n1).abs() <= 1e-12 * c * n1, "{} vs {}", n2, c * n1);
    }

    /// Concavity bound used for the integral means: `x^β − y^β ≤ β y^{β−1}(x − y)`.
    #[test]
    fn concave_power_bound(x in 1e-3f64..10.0, y in 1e-3f64..10.0, beta in 0.01f64..1.0) {
        let lhs = x.powf(beta) - y.powf(beta);
        let rhs = beta * y.powf(beta - 1.0) * (x - y);
        prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn beta_partial_monotone_and_reflects(x in 0.01f64..0.99, dx in 0.001f64..0.5, a in 0.05f64..0.95) {
        let lo = beta_partial(x, a).unwrap();
        let hi = beta_partial((x + dx).min(1.0), a).unwrap();
        prop_assert!(hi >= lo);
        // B_x(a, 1−a) + B_{1−x}(1−a, a) = B(a, 1−a)
        let other = beta_partial(1.0 - x, 1.0 - a).unwrap();
        prop_assert!((lo + other - PI / (PI * a).sin()).abs() <= 1e-9);
    }

    #[test]
    fn discriminant_sign_matches_quartic(p in 1.5f64..50.0, alpha in -0.9f64..40.0) {
        prop_assume!(alpha + 2.0 < p);
        if let Ok(d) = discriminant_k(p, alpha) {
            let q = quartic_condition(p, alpha);
            // p²Δ_k is the quartic; compare where the sign is not lost to rounding
            prop_assert!((p * p * d - q).abs() <= 1e-9 * (1.0 + q.abs()));
            if q.abs() > 1e-9 {
                prop_assert_eq!(d > 0.0, q > 0.0);
            }
        }
    }

    #[test]
    fn thm41_is_monotone_in_alpha(p in 2.1f64..40.0, s in 0.0f64..1.0) {
        if let Ok(up) = alpha_up(p) {
            let top = up.min(p - 2.0) * 0.999;
            prop_assume!(top > 0.0);
            let alpha = s * top;
            prop_assert!(classify(p, top).settled_by(Settlement::Thm41));
            prop_assert!(classify(p, alpha).settled_by(Settlement::Thm41));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The test-function ratio never exceeds the target beyond its budget.
    #[test]
    fn ratio_law(alpha in 0.0f64..3.0, extra in 0.5f64..8.0, theta in 0.1f64..0.95) {
        let p = alpha + 2.0 + extra;
        let params = SpaceParams::new(p, alpha).unwrap();
        let gamma = theta * params.critical_exponent();
        let lb = lower_bound_ratio(params, TestFunctionSpec::new(gamma)).unwrap();
        prop_assert!(lb.ratio > 0.0);
        prop_assert!(lb.ratio <= lb.target + lb.quad_error_budget, "{} > {}", lb.ratio, lb.target);
    }
}
