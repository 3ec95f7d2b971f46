//! Gauss–Legendre rules on `[0, 1]`.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Largest cached level; rules up to `2^MAX_LEVEL` nodes are memoised.
pub const MAX_LEVEL: usize = 14;

/// A Gauss–Legendre rule mapped to `[0, 1]`.
///
/// `x[i]` and `xc[i] = 1 − x[i]` are both stored to full relative precision,
/// which matters once the nodes are pushed through a grading map.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub x: Vec<f64>,
    pub xc: Vec<f64>,
    pub w: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Builds the `n`-point rule.
///
/// Newton's method runs in the angle `θ`, `ξ = cos θ`, so that the half-gaps
/// `(1 ± ξ)/2 = cos²(θ/2), sin²(θ/2)` come out without cancellation.
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut xc = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let half = n.div_ceil(2);
    for k in 0..half {
        let mut theta = PI * (k as f64 + 0.75) / (nf + 0.5);
        let mut dp = 0.0;
        for _ in 0..100 {
            let c = theta.cos();
            let (p, d) = legendre_with_derivative(n, c);
            dp = d;
            let step = p / (theta.sin() * d);
            theta += step;
            if step.abs() <= 1e-16 * theta.max(1e-300) {
                break;
            }
        }
        let c = theta.cos();
        let (_, d) = legendre_with_derivative(n, c);
        if d.is_finite() {
            dp = d;
        }
        let s = theta.sin();
        let weight = 1.0 / (s * s * dp * dp);
        let up = (0.5 * theta).cos().powi(2);
        let down = (0.5 * theta).sin().powi(2);
        // theta small means xi near 1: the node sits near the right end.
        let right = n - 1 - k;
        x[right] = up;
        xc[right] = down;
        w[right] = weight;
        x[k] = down;
        xc[k] = up;
        w[k] = weight;
    }
    if n % 2 == 1 {
        let mid = n / 2;
        x[mid] = 0.5;
        xc[mid] = 0.5;
    }
    GaussRule { x, xc, w }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// The memoised rule with `2^level` nodes.
pub fn cached(level: usize) -> &'static GaussRule {
    static CACHE: [OnceLock<GaussRule>; MAX_LEVEL + 1] = [const { OnceLock::new() }; MAX_LEVEL + 1];
    assert!(level <= MAX_LEVEL, "Gauss-Legendre level {level} exceeds cache");
    CACHE[level].get_or_init(|| gauss_legendre(1 << level))
}

/// Level of the smallest cached rule with at least `n` nodes.
pub fn level_for(n: usize) -> usize {
    let mut level = 0;
    while (1usize << level) < n && level < MAX_LEVEL {
        level += 1;
    }
    level
}
