//! Analytic functions on the unit disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Default truncation degree for test functions.
pub const DEFAULT_DEGREE: usize = 512;

/// Something that can be evaluated inside the disk.
///
/// Implementations receive both `z` and `w = 1 − z`; the latter is supplied to
/// full relative precision so that functions singular at `z = 1` can be
/// evaluated at nodes where `1 − z` is far below machine epsilon.
pub trait AnalyticFn: Sync {
    fn eval_at(&self, z: Complex64, w: Complex64) -> Complex64;

    fn value(&self, z: Complex64) -> Complex64 {
        self.eval_at(z, Complex64::new(1.0, 0.0) - z)
    }
}

/// Truncated Taylor series `Σ_{n ≤ degree} a_n z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    pub coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// A series with the given coefficients; an empty list is the zero series.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); degree + 1],
        }
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut s = Self::zero(k);
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation; rejects points outside the open disk.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return domain(format!("|z| = {} is not inside the unit disk", z.norm()));
        }
        Ok(self.horner(z))
    }

    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Real parts of the coefficients when every imaginary part vanishes.
    pub fn real_coeffs(&self) -> Option<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| (c.im == 0.0).then_some(c.re))
            .collect()
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(zero)
                    + other.coeffs.get(i).copied().unwrap_or(zero)
            })
            .collect();
        Self { coeffs }
    }
}

impl AnalyticFn for PowerSeries {
    fn eval_at(&self, z: Complex64, _w: Complex64) -> Complex64 {
        self.horner(z)
    }
}

/// Taylor coefficients of `(1 − z)^{−γ}` up to `degree`, as reals.
pub fn binomial_coeffs(gamma: f64, degree: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(degree + 1);
    let mut cur = 1.0;
    c.push(cur);
    for n in 0..degree {
        let nf = n as f64;
        cur *= (nf + gamma) / (nf + 1.0);
        c.push(cur);
    }
    c
}

/// `(1 − z)^{−γ}` truncated at `degree`.
pub fn binomial_series(gamma: f64, degree: usize) -> PowerSeries {
    PowerSeries::from_real(&binomial_coeffs(gamma, degree))
}

/// The lower-bound test function `f_γ(z) = (1 − z)^{−γ}` and its truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionSpec {
    pub gamma: f64,
    pub degree: usize,
}

impl TestFunctionSpec {
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma,
            degree: DEFAULT_DEGREE,
        }
    }

    pub fn with_degree(gamma: f64, degree: usize) -> Self {
        Self { gamma, degree }
    }

    /// `p γ < α + 2`, i.e. the untruncated function lies in `A^p_α`.
    pub fn in_space(&self, p: f64, alpha: f64) -> bool {
        p * self.gamma < alpha + 2.0
    }

    pub fn series(&self) -> PowerSeries {
        binomial_series(self.gamma, self.degree)
    }

    pub fn closed_form(&self) -> Binomial {
        Binomial { gamma: self.gamma }
    }
}

/// `(1 − z)^{−γ} = exp(−γ Log(1 − z))`, principal branch, untruncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binomial {
    pub gamma: f64,
}

impl AnalyticFn for Binomial {
    fn eval_at(&self, _z: Complex64, w: Complex64) -> Complex64 {
        if self.gamma == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        (-self.gamma * w.ln()).exp()
    }
}
