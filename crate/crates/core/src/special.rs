//! Gamma-ratio sequences, fractional-derivative multipliers and the circle
//! kernel integral `G(a) = ∫_0^{2π} dθ / |1 - ā e^{iθ}|^{1+τ}`.
//!
//! Nothing here forms a Gamma value: every sequence is produced by its
//! multiplicative recurrence from an exact starting value, which stays
//! finite far beyond the `n ≈ 170` overflow point of `Γ` in double precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analytic::CoefficientFunction;
use crate::error::{domain, Error, Result};

/// `c_{n,α} = Γ(n+α) / (Γ(n+1) Γ(α))` for `n = 0..=N`, the Taylor
/// coefficients of `(1 - z)^{-α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRatioSeq {
    alpha: f64,
    values: Vec<f64>,
}

impl GammaRatioSeq {
    pub fn new(alpha: f64, n_max: usize) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain(format!("gamma ratio needs alpha > 0, got {alpha}")));
        }
        let mut values = Vec::with_capacity(n_max + 1);
        let mut c = 1.0;
        values.push(c);
        for n in 0..n_max {
            let n = n as f64;
            c = c * (n + alpha) / (n + 1.0);
            values.push(c);
        }
        Ok(Self { alpha, values })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Shorthand for [`GammaRatioSeq::new`].
pub fn gamma_ratio(alpha: f64, n_max: usize) -> Result<GammaRatioSeq> {
    GammaRatioSeq::new(alpha, n_max)
}

/// Diagonal multiplier of `R^{β,γ}`:
/// `m_n = Γ(2+β) Γ(n+2+β+γ) / (Γ(2+β+γ) Γ(n+2+β))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracDiffMultiplier {
    beta: f64,
    gamma: f64,
    values: Vec<f64>,
}

fn is_negative_integer(x: f64) -> bool {
    x < 0.0 && (x - x.round()).abs() < 1e-12
}

impl FracDiffMultiplier {
    pub fn new(beta: f64, gamma: f64, n_max: usize) -> Result<Self> {
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(domain("fractional multiplier parameters must be finite"));
        }
        if is_negative_integer(1.0 + beta) || is_negative_integer(1.0 + beta + gamma) {
            return Err(domain(format!(
                "R^(beta,gamma) undefined: 1+beta = {} or 1+beta+gamma = {} is a negative integer",
                1.0 + beta,
                1.0 + beta + gamma
            )));
        }
        // m_0 = 1 and m_{n+1}/m_n = (n+2+β+γ)/(n+2+β).
        let mut values = Vec::with_capacity(n_max + 1);
        let mut m = 1.0;
        values.push(m);
        for n in 0..n_max {
            let n = n as f64;
            m *= (n + 2.0 + beta + gamma) / (n + 2.0 + beta);
            values.push(m);
        }
        Ok(Self {
            beta,
            gamma,
            values,
        })
    }

    /// The multiplier `R^{-1,α-1}`, which coincides with `c_{n,α}`.
    pub fn hilbert(alpha: f64, n_max: usize) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(domain(format!("alpha must be positive, got {alpha}")));
        }
        Self::new(-1.0, alpha - 1.0, n_max)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }
}

/// Applies `R^{β,γ}` coefficientwise. The result carries the input's tail
/// estimate only when the multiplier is the identity.
pub fn frac_diff(multiplier: &FracDiffMultiplier, f: &CoefficientFunction) -> Result<CoefficientFunction> {
    if multiplier.truncation() != f.truncation() {
        return Err(domain(format!(
            "multiplier truncation {} does not match function truncation {}",
            multiplier.truncation(),
            f.truncation()
        )));
    }
    if multiplier.gamma() == 0.0 {
        return Ok(f.clone());
    }
    let coeffs: Vec<Complex64> = f
        .coeffs()
        .iter()
        .zip(multiplier.values())
        .map(|(a, m)| a * *m)
        .collect();
    Ok(CoefficientFunction::from_series(coeffs))
}

/// Number of circle samples used for `G(a)`.
pub fn kernel_samples(radius: f64) -> usize {
    let scale = (64.0 / (1.0 - radius)).ceil();
    if scale.is_finite() && scale > 1024.0 {
        scale as usize
    } else {
        1024
    }
}

/// `G(a) = ∫_0^{2π} dθ / |1 - ā e^{iθ}|^{1+τ}` by the periodic trapezoid rule.
pub fn kernel_integral_g(a: Complex64, tau: f64) -> Result<f64> {
    let r = a.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("G(a) needs |a| < 1, got |a| = {r}")));
    }
    if !tau.is_finite() {
        return Err(domain("tau must be finite"));
    }
    let m = kernel_samples(r);
    let ac = a.conj();
    let h = 2.0 * PI / m as f64;
    let expo = -(1.0 + tau) / 2.0;
    let sum: f64 = (0..m)
        .map(|j| {
            let e = Complex64::from_polar(1.0, j as f64 * h);
            (Complex64::new(1.0, 0.0) - ac * e).norm_sqr().powf(expo)
        })
        .sum();
    Ok(sum * h)
}
