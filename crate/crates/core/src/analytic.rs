//! Analytic functions on the disk as truncated Taylor series, the extremal
//! test families, and Hardy / Bloch / coefficient norm estimators.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fft::circle_values;

/// Largest modulus accepted by [`CoefficientFunction::evaluate`].
pub const MAX_EVAL_RADIUS: f64 = 0.9999;

/// Truncation error above which a closed form replaces the series.
const SERIES_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Closed form recorded alongside the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Family {
    /// `(1-a²)^{1/p} (1-az)^{-2/p}`
    FA { p: f64, a: f64 },
    /// `log(e/(1-az))`
    GA { a: f64 },
    Monomial { n: usize },
    Custom,
}

/// Bound on the discarded coefficients `a_k`, `k > N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Tail {
    /// No coefficients beyond the truncation.
    Exact,
    /// `|a_k| <= lead·rho^{k-N-1}`, a proven bound.
    Geometric { lead: f64, rho: f64 },
    /// Same shape, extrapolated from the last stored coefficients.
    Extrapolated { lead: f64, rho: f64 },
}

impl Tail {
    fn lead_rho(&self) -> Option<(f64, f64)> {
        match *self {
            Tail::Exact => None,
            Tail::Geometric { lead, rho } | Tail::Extrapolated { lead, rho } => Some((lead, rho)),
        }
    }

    pub fn is_proven(&self) -> bool {
        !matches!(self, Tail::Extrapolated { .. })
    }
}

/// `f(z) = Σ a_k z^k` truncated at `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFunction {
    coeffs: Vec<Complex64>,
    family: Family,
    tail: Tail,
}

fn check_unit_open(name: &str, a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in (0,1), got {a}")))
    }
}

impl CoefficientFunction {
    /// The test family `f_a` for `H^p`, `p ∈ (0, 2]`.
    pub fn family_fa(p: f64, a: f64, n: usize) -> Result<Self> {
        if !(p > 0.0 && p <= 2.0) {
            return Err(domain(format!("f_a needs p in (0,2], got {p}")));
        }
        check_unit_open("a", a)?;
        let e = 2.0 / p;
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut v = (1.0 - a * a).powf(1.0 / p);
        for k in 0..=n {
            coeffs.push(Complex64::new(v, 0.0));
            let kf = k as f64;
            v *= a * (kf + e) / (kf + 1.0);
        }
        let nf = n as f64;
        let rho = a.max(a * (nf + 1.0 + e) / (nf + 2.0));
        Ok(Self {
            coeffs,
            family: Family::FA { p, a },
            tail: Tail::Geometric { lead: v, rho },
        })
    }

    /// The log family `g_a(z) = log(e/(1-az))`.
    pub fn family_ga(a: f64, n: usize) -> Result<Self> {
        check_unit_open("a", a)?;
        let mut coeffs = Vec::with_capacity(n + 1);
        coeffs.push(ONE);
        let mut pw = 1.0;
        for k in 1..=n {
            pw *= a;
            coeffs.push(Complex64::new(pw / k as f64, 0.0));
        }
        let lead = pw * a / (n as f64 + 1.0);
        Ok(Self {
            coeffs,
            family: Family::GA { a },
            tail: Tail::Geometric { lead, rho: a },
        })
    }

    pub fn monomial(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(domain(format!("monomial z^{k} does not fit truncation {n}")));
        }
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[k] = ONE;
        Ok(Self {
            coeffs,
            family: Family::Monomial { n: k },
            tail: Tail::Exact,
        })
    }

    /// A polynomial: no coefficients beyond the last one given.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::custom(coeffs, Tail::Exact)
    }

    /// Caller-supplied coefficients with a declared tail bound.
    pub fn custom(coeffs: Vec<Complex64>, tail: Tail) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("coefficient list is empty"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(domain("coefficients must be finite"));
        }
        if let Some((lead, rho)) = tail.lead_rho() {
            if !(lead >= 0.0) || !(rho >= 0.0) {
                return Err(domain("tail bound needs lead >= 0 and rho >= 0"));
            }
        }
        Ok(Self {
            coeffs,
            family: Family::Custom,
            tail,
        })
    }

    /// Wraps computed coefficients; the tail is extrapolated from the last two.
    pub fn from_series(coeffs: Vec<Complex64>) -> Self {
        let n = coeffs.len();
        let last = coeffs.last().map_or(0.0, |c| c.norm());
        let prev = if n >= 2 { coeffs[n - 2].norm() } else { 0.0 };
        let tail = if last == 0.0 {
            Tail::Extrapolated { lead: 0.0, rho: 0.0 }
        } else {
            let rho = if prev > 0.0 { last / prev } else { 1.0 };
            Tail::Extrapolated { lead: last * rho, rho }
        };
        Self {
            coeffs,
            family: Family::Custom,
            tail,
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Same function with a different truncation order.
    pub fn with_truncation(&self, n: usize) -> Result<Self> {
        match self.family {
            Family::FA { p, a } => Self::family_fa(p, a, n),
            Family::GA { a } => Self::family_ga(a, n),
            Family::Monomial { n: k } => Self::monomial(k, n),
            Family::Custom => {
                if n < self.truncation() {
                    return Err(domain(format!(
                        "cannot shorten a custom series from {} to {n} coefficients",
                        self.truncation()
                    )));
                }
                if n > self.truncation() && self.tail != Tail::Exact {
                    return Err(Error::Truncation(
                        "cannot extend a custom series with an inexact tail".into(),
                    ));
                }
                let mut coeffs = self.coeffs.clone();
                coeffs.resize(n + 1, ZERO);
                Ok(Self {
                    coeffs,
                    family: Family::Custom,
                    tail: self.tail,
                })
            }
        }
    }

    /// Bound on `Σ_{k>N} |a_k| r^k`.
    pub fn tail_sum_bound(&self, r: f64) -> f64 {
        let Some((lead, rho)) = self.tail.lead_rho() else {
            return 0.0;
        };
        if lead == 0.0 || r == 0.0 {
            return 0.0;
        }
        let x = rho * r;
        if x >= 1.0 {
            return f64::INFINITY;
        }
        lead * r.powf(self.truncation() as f64 + 1.0) / (1.0 - x)
    }

    /// Bound on `Σ_{k>N} k |a_k| r^{k-1}`.
    fn deriv_tail_bound(&self, r: f64) -> f64 {
        let Some((lead, rho)) = self.tail.lead_rho() else {
            return 0.0;
        };
        if lead == 0.0 {
            return 0.0;
        }
        let x = rho * r;
        if x >= 1.0 {
            return f64::INFINITY;
        }
        let n1 = self.truncation() as f64 + 1.0;
        lead * r.powf(n1 - 1.0) * (n1 / (1.0 - x) + x / ((1.0 - x) * (1.0 - x)))
    }

    /// `Σ_{k>N} |a_k|`.
    pub fn l1_tail(&self) -> f64 {
        self.tail_sum_bound(1.0)
    }

    pub fn has_closed_form(&self) -> bool {
        self.family != Family::Custom
    }

    fn closed_form(&self, z: Complex64) -> Option<Complex64> {
        match self.family {
            Family::FA { p, a } => {
                let w = ONE - z * a;
                Some((-(2.0 / p) * w.ln()).exp() * (1.0 - a * a).powf(1.0 / p))
            }
            Family::GA { a } => Some(ONE - (ONE - z * a).ln()),
            Family::Monomial { n } => Some(z.powu(n as u32)),
            Family::Custom => None,
        }
    }

    fn closed_derivative(&self, z: Complex64) -> Option<Complex64> {
        match self.family {
            Family::FA { p, a } => {
                let w = ONE - z * a;
                let e = 2.0 / p;
                Some((-(e + 1.0) * w.ln()).exp() * (e * a * (1.0 - a * a).powf(1.0 / p)))
            }
            Family::GA { a } => Some(Complex64::new(a, 0.0) / (ONE - z * a)),
            Family::Monomial { n } => Some(if n == 0 {
                ZERO
            } else {
                z.powu(n as u32 - 1) * n as f64
            }),
            Family::Custom => None,
        }
    }

    /// Horner evaluation of the stored coefficients.
    pub fn eval_series(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, a| acc * z + a)
    }

    /// `f(z)` for `|z| <= 0.9999`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if !(r <= MAX_EVAL_RADIUS) {
            return Err(domain(format!("evaluation needs |z| <= {MAX_EVAL_RADIUS}, got {r}")));
        }
        let bound = self.tail_sum_bound(r);
        if bound <= SERIES_TOL {
            return Ok(self.eval_series(z));
        }
        if let Some(v) = self.closed_form(z) {
            return Ok(v);
        }
        let v = self.eval_series(z);
        if bound <= SERIES_TOL * (1.0 + v.norm()) {
            return Ok(v);
        }
        Err(Error::Truncation(format!(
            "series truncated at N = {} leaves an error of up to {bound:e} at |z| = {r}",
            self.truncation()
        )))
    }

    /// `f(t)` for `t = 1 - tc ∈ [0, 1)`, accurate when `tc` is tiny.
    pub fn value_on_segment(&self, t: f64, tc: f64) -> Result<Complex64> {
        match self.family {
            Family::FA { p, a } => {
                let w = (1.0 - a) + a * tc;
                Ok(Complex64::new((1.0 - a * a).powf(1.0 / p) * w.powf(-2.0 / p), 0.0))
            }
            Family::GA { a } => Ok(Complex64::new(1.0 - ((1.0 - a) + a * tc).ln(), 0.0)),
            Family::Monomial { n } => Ok(Complex64::new(t.powi(n as i32), 0.0)),
            Family::Custom => {
                let v = self.eval_series(Complex64::new(t, 0.0));
                let bound = self.tail_sum_bound(t);
                if bound <= SERIES_TOL * (1.0 + v.norm()) {
                    Ok(v)
                } else {
                    Err(Error::Truncation(format!(
                        "series truncated at N = {} cannot be evaluated at t = {t} (tail up to {bound:e})",
                        self.truncation()
                    )))
                }
            }
        }
    }

    /// Derivative coefficients `(k+1)a_{k+1}`.
    fn derivative_coeffs(&self) -> Vec<Complex64> {
        if self.coeffs.len() == 1 {
            return vec![ZERO];
        }
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * k as f64)
            .collect()
    }
}

impl fmt::Display for CoefficientFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::FA { p, a } => write!(f, "fa:p={p},a={a}"),
            Family::GA { a } => write!(f, "ga:a={a}"),
            Family::Monomial { n } => write!(f, "mono:n={n}"),
            Family::Custom => write!(f, "custom[{}]", self.coeffs.len()),
        }
    }
}

/// Which norm a [`NormEstimate`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Space {
    Hp { p: f64 },
    Bloch,
    CoefSum { p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormEstimate {
    pub value: f64,
    pub space: Space,
    pub radius_grid: Vec<f64>,
    pub angle_samples: Vec<usize>,
    pub converged: bool,
}

/// Radius and angle grid controls for the norm estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct Discretization {
    /// Largest radius used for series without a closed form.
    pub r_max: f64,
    /// Radius ladder `1 - 2^{-j}`, `j = 1..=levels`.
    pub levels: usize,
    pub min_samples: usize,
    /// Angular samples per unit of `1/(1-r)`.
    pub samples_per_scale: f64,
    /// Relative tolerance for the refinement test.
    pub tol: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            r_max: 1.0 - 2f64.powi(-12),
            levels: 12,
            min_samples: 256,
            samples_per_scale: 16.0,
            tol: 1e-8,
        }
    }
}

impl Discretization {
    fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(domain(format!("r_max must lie in (0,1), got {}", self.r_max)));
        }
        if self.levels == 0 || self.min_samples < 4 || !(self.samples_per_scale > 0.0) || !(self.tol > 0.0) {
            return Err(domain("discretization needs levels >= 1, min_samples >= 4, positive scale and tol"));
        }
        Ok(())
    }

    /// Power-of-two angular sample count for radius `r < 1`.
    pub fn samples(&self, r: f64) -> usize {
        let want = (self.samples_per_scale / (1.0 - r)).ceil();
        let want = if want.is_finite() { want as usize } else { usize::MAX / 4 };
        want.max(self.min_samples).next_power_of_two()
    }
}

fn pth_mean(values: impl Iterator<Item = f64>, m: usize, p: f64) -> f64 {
    let s: f64 = if p == 2.0 {
        values.map(|v| v * v).sum()
    } else if p == 1.0 {
        values.sum()
    } else {
        values.map(|v| v.powf(p)).sum()
    };
    (s / m as f64).powf(1.0 / p)
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("p must be positive and finite, got {p}")))
    }
}

/// `M_p(r, f)` of the stored series by `m`-point periodic trapezoid rule.
pub fn circle_mean_with(f: &CoefficientFunction, p: f64, r: f64, m: usize) -> f64 {
    let vals = circle_values(f.coeffs(), r, m);
    pth_mean(vals.iter().map(|v| v.norm()), m, p)
}

/// `M_p(r, f)` of the stored series, sample count scaled to `1/(1-r)`.
pub fn circle_mean(f: &CoefficientFunction, p: f64, r: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..1.0).contains(&r) {
        return Err(domain(format!("circle mean needs 0 <= r < 1, got {r}")));
    }
    Ok(circle_mean_with(f, p, r, Discretization::default().samples(r)))
}

fn boundary_mean_closed(f: &CoefficientFunction, p: f64, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    let vals = (0..m).map(|j| {
        let z = Complex64::from_polar(1.0, h * j as f64);
        f.closed_form(z).map_or(0.0, |v| v.norm())
    });
    pth_mean(vals, m, p)
}

/// `‖f‖_{H^p} = sup_r M_p(r, f)`.
pub fn hardy_norm(f: &CoefficientFunction, p: f64, cfg: &Discretization) -> Result<NormEstimate> {
    check_p(p)?;
    cfg.validate()?;
    let space = Space::Hp { p };
    let close = |a: f64, b: f64| (a - b).abs() <= cfg.tol * (1.0 + b.abs());

    // Closed forms and polynomials are continuous on the closed disk, so the
    // sup over r is the boundary mean.
    let boundary = match f.family() {
        Family::FA { a, .. } | Family::GA { a } => {
            let m0 = ((64.0 / (1.0 - a)).ceil() as usize).max(cfg.min_samples).next_power_of_two();
            Some((m0, true))
        }
        Family::Monomial { .. } => Some((cfg.min_samples.next_power_of_two(), true)),
        Family::Custom if f.tail() == Tail::Exact || f.l1_tail() <= SERIES_TOL * (1.0 + l1_norm(f)) => {
            let m0 = (4 * (f.truncation() + 1).next_power_of_two()).max(cfg.min_samples);
            Some((m0, false))
        }
        Family::Custom => None,
    };
    if let Some((m0, closed)) = boundary {
        let eval = |m: usize| {
            if closed {
                boundary_mean_closed(f, p, m)
            } else {
                circle_mean_with(f, p, 1.0, m)
            }
        };
        let v1 = eval(m0);
        let v2 = eval(2 * m0);
        return Ok(NormEstimate {
            value: v2,
            space,
            radius_grid: vec![1.0],
            angle_samples: vec![m0, 2 * m0],
            converged: close(v1, v2),
        });
    }

    let mut radii = Vec::new();
    let mut samples = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for j in 1..=cfg.levels {
        let r = (1.0 - 2f64.powi(-(j as i32))).min(cfg.r_max);
        if radii.last().is_some_and(|&last| r <= last) {
            break;
        }
        let m = cfg.samples(r);
        let v = circle_mean_with(f, p, r, m);
        let reliable = f.tail_sum_bound(r) <= 1e-10 * (1.0 + v);
        if !reliable && !values.is_empty() {
            break;
        }
        radii.push(r);
        samples.push(m);
        values.push(v);
        if !reliable {
            break;
        }
    }
    let n = values.len();
    let converged = n >= 2 && close(values[n - 2], values[n - 1]);
    Ok(NormEstimate {
        value: values[n - 1],
        space,
        radius_grid: radii,
        angle_samples: samples,
        converged,
    })
}

fn l1_norm(f: &CoefficientFunction) -> f64 {
    f.coeffs().iter().map(|a| a.norm()).sum()
}

/// `(Σ |a_n|²)^{1/2}` over the stored coefficients.
pub fn hardy2_norm_by_coeffs(f: &CoefficientFunction) -> f64 {
    f.coeffs().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Radii at which the Bloch seminorm is sampled.
pub fn bloch_radii() -> Vec<f64> {
    let mut r: Vec<f64> = (0..=18).map(|i| 0.05 * i as f64).collect();
    r.extend((4..=12).map(|j| 1.0 - 2f64.powi(-j)));
    r
}

/// `sup (1-|z|²)|f'(z)|` over the Bloch radius grid.
pub fn bloch_seminorm(f: &CoefficientFunction, cfg: &Discretization) -> Result<NormEstimate> {
    cfg.validate()?;
    let dcoeffs = CoefficientFunction::from_series(f.derivative_coeffs());
    let mut sup: f64 = 0.0;
    let mut radii = Vec::new();
    let mut samples = Vec::new();
    let mut converged = true;
    for r in bloch_radii() {
        let m = if r == 0.0 { 1 } else { cfg.samples(r) };
        let w = 1.0 - r * r;
        let peak = if f.has_closed_form() {
            let h = 2.0 * PI / m as f64;
            (0..m)
                .map(|j| {
                    let z = Complex64::from_polar(r, h * j as f64);
                    f.closed_derivative(z).map_or(0.0, |v| v.norm())
                })
                .fold(0.0, f64::max)
        } else {
            if f.deriv_tail_bound(r) > 1e-10 * (1.0 + sup) {
                converged = false;
                break;
            }
            circle_values(dcoeffs.coeffs(), r, m)
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max)
        };
        sup = sup.max(w * peak);
        radii.push(r);
        samples.push(m);
    }
    Ok(NormEstimate {
        value: sup,
        space: Space::Bloch,
        radius_grid: radii,
        angle_samples: samples,
        converged,
    })
}

/// Coefficient growth against `n^{1/p-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthReport {
    pub p: f64,
    pub max_ratio: f64,
    pub argmax: usize,
    /// Maxima over the blocks `2^j <= n+1 < 2^{j+1}`.
    pub block_maxima: Vec<f64>,
    /// Last block maximum divided by the overall maximum.
    pub final_ratio: f64,
}

pub fn coeff_growth_check(f: &CoefficientFunction, p: f64) -> Result<GrowthReport> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(domain(format!("coefficient growth check needs p in (0,1], got {p}")));
    }
    let e = 1.0 / p - 1.0;
    let mut max_ratio = 0.0;
    let mut argmax = 0;
    let mut blocks: Vec<f64> = Vec::new();
    for (n, a) in f.coeffs().iter().enumerate() {
        let ratio = a.norm() / (n.max(1) as f64).powf(e);
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = n;
        }
        let b = (usize::BITS - 1 - (n + 1).leading_zeros()) as usize;
        if blocks.len() <= b {
            blocks.resize(b + 1, 0.0);
        }
        blocks[b] = blocks[b].max(ratio);
    }
    let final_ratio = if max_ratio > 0.0 {
        blocks.last().copied().unwrap_or(0.0) / max_ratio
    } else {
        0.0
    };
    Ok(GrowthReport {
        p,
        max_ratio,
        argmax,
        block_maxima: blocks,
        final_ratio,
    })
}

/// `(Σ (n+1)^{p-2} |a_n|^p)^{1/p}`.
pub fn coeff_sum_check(f: &CoefficientFunction, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(domain(format!("coefficient sum check needs p in (0,2], got {p}")));
    }
    let s: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| ((n + 1) as f64).powf(p - 2.0) * a.norm().powf(p))
        .sum();
    Ok(s.powf(1.0 / p))
}
