//! Positive Borel measures on `[0, 1)`: densities of the form
//! `scale·(1-t)^γ·log^β(e/(1-t))` on `[lower, 1)` plus finitely many atoms.
//!
//! Moments and tail masses use closed forms when `β = 0` and graded
//! quadrature otherwise (see [`crate::quadrature`]).

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fit;
use crate::quadrature::{composite_u, exponential_cutoff, Node, PANEL_WIDTH};

/// Decay (in e-folds) below which density weight is dropped.
const MASS_DECAY: f64 = 40.0;

/// `scale·(1-t)^γ·log^β(e/(1-t)) dt` restricted to `[lower, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub gamma: f64,
    pub beta: f64,
    pub scale: f64,
    #[serde(default)]
    pub lower: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeasurePart {
    Density(Density),
    Atom(Atom),
}

impl Density {
    pub fn new(gamma: f64, beta: f64, scale: f64) -> Result<Self> {
        let d = Density {
            gamma,
            beta,
            scale,
            lower: 0.0,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || !self.beta.is_finite() {
            return Err(domain("density exponents must be finite"));
        }
        if self.gamma <= -1.0 {
            return Err(Error::InfiniteMass(format!(
                "density exponent gamma = {} must exceed -1 for finite total mass",
                self.gamma
            )));
        }
        if !(self.scale >= 0.0) || !self.scale.is_finite() {
            return Err(domain(format!("density scale must be >= 0, got {}", self.scale)));
        }
        if !(0.0..1.0).contains(&self.lower) {
            return Err(domain(format!("density support must start in [0,1), got {}", self.lower)));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        1.0 - self.lower
    }

    /// Density value at `t = 1 - tc`.
    pub fn value_at(&self, tc: f64) -> f64 {
        if tc > self.width() || tc <= 0.0 {
            return 0.0;
        }
        let mut v = self.scale * tc.powf(self.gamma);
        if self.beta != 0.0 {
            v *= (1.0 - tc.ln()).powf(self.beta);
        }
        v
    }

    /// Quadrature nodes on `[lower, 1)`; `resolution` is the reciprocal of the
    /// smallest scale in `1 - t` the integrand is expected to resolve.
    pub fn nodes(&self, resolution: f64, width: f64) -> Vec<Node> {
        if self.scale == 0.0 {
            return Vec::new();
        }
        let d = self.width();
        self.nodes_from(d, resolution, width)
    }

    /// Nodes for the part of the density on `[1 - tc0, 1)`, `tc0 <= width`.
    fn nodes_from(&self, tc0: f64, resolution: f64, width: f64) -> Vec<Node> {
        let lb = -tc0.ln();
        let u_max = exponential_cutoff(self.gamma + 1.0, self.beta, lb, MASS_DECAY)
            + (1.0 + tc0 * resolution.max(0.0)).ln();
        self.nodes_span(tc0, u_max, width)
    }

    /// Nodes on `u ∈ [0, u_max]` with `t = 1 - width·e^{-u}`.
    pub fn nodes_to(&self, u_max: f64, width: f64) -> Vec<Node> {
        if self.scale == 0.0 {
            return Vec::new();
        }
        self.nodes_span(self.width(), u_max, width)
    }

    fn nodes_span(&self, tc0: f64, u_max: f64, width: f64) -> Vec<Node> {
        let c = self.gamma + 1.0;
        let lb = -tc0.ln();
        let base = self.scale * tc0.powf(c);
        let start = 1.0 - tc0;
        composite_u(u_max, width)
            .into_iter()
            .map(|(u, wu)| {
                let tc = tc0 * (-u).exp();
                let t = start - tc0 * (-u).exp_m1();
                let mut w = wu * base * (-c * u).exp();
                if self.beta != 0.0 {
                    w *= (1.0 + lb + u).powf(self.beta);
                }
                Node { t, tc, w }
            })
            .collect()
    }

    /// `∫_{[1-tc, 1)}` of the density.
    pub fn tail_c(&self, tc: f64) -> f64 {
        let tc0 = tc.min(self.width());
        if tc0 <= 0.0 || self.scale == 0.0 {
            return 0.0;
        }
        if self.beta == 0.0 {
            return self.scale * tc0.powf(self.gamma + 1.0) / (self.gamma + 1.0);
        }
        self.nodes_from(tc0, 0.0, PANEL_WIDTH).iter().map(|n| n.w).sum()
    }

    pub fn has_closed_moments(&self) -> bool {
        self.beta == 0.0 && self.lower == 0.0
    }

    /// Beta-function moments `scale·B(n+1, γ+1)` through the ratio recurrence.
    fn closed_moments(&self, values: &mut [f64], errs: &mut [f64]) {
        let g = self.gamma;
        let mut mu = self.scale / (g + 1.0);
        for (n, (v, e)) in values.iter_mut().zip(errs.iter_mut()).enumerate() {
            *v += mu;
            *e += 4.0 * f64::EPSILON * (n as f64 + 1.0) * mu;
            let nf = n as f64;
            mu *= (nf + 1.0) / (nf + g + 2.0);
        }
    }
}

impl Atom {
    pub fn new(location: f64, weight: f64) -> Result<Self> {
        let a = Atom { location, weight };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.location) {
            return Err(domain(format!(
                "atom location must lie in [0,1), got {}",
                self.location
            )));
        }
        if !(self.weight >= 0.0) || !self.weight.is_finite() {
            return Err(domain(format!("atom weight must be >= 0, got {}", self.weight)));
        }
        Ok(())
    }

    fn node(&self) -> Node {
        Node {
            t: self.location,
            tc: 1.0 - self.location,
            w: self.weight,
        }
    }
}

impl MeasurePart {
    fn validate(&self) -> Result<()> {
        match self {
            MeasurePart::Density(d) => d.validate(),
            MeasurePart::Atom(a) => a.validate(),
        }
    }
}

/// A finite positive measure on `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measure {
    parts: Vec<MeasurePart>,
    label: String,
}

impl Measure {
    pub fn new(parts: Vec<MeasurePart>, label: impl Into<String>) -> Result<Self> {
        for p in &parts {
            p.validate()?;
        }
        Ok(Self {
            parts,
            label: label.into(),
        })
    }

    pub fn zero() -> Self {
        Self {
            parts: Vec::new(),
            label: "zero".into(),
        }
    }

    pub fn lebesgue() -> Self {
        Self::poly(0.0).expect("Lebesgue measure is valid")
    }

    /// `(1-t)^γ dt`.
    pub fn poly(gamma: f64) -> Result<Self> {
        Self::density(gamma, 0.0, 1.0)
    }

    /// `(1-t)^γ log^β(e/(1-t)) dt`.
    pub fn polylog(gamma: f64, beta: f64) -> Result<Self> {
        Self::density(gamma, beta, 1.0)
    }

    pub fn density(gamma: f64, beta: f64, scale: f64) -> Result<Self> {
        let d = Density::new(gamma, beta, scale)?;
        let m = Self {
            parts: vec![MeasurePart::Density(d)],
            label: String::new(),
        };
        Ok(m.relabeled())
    }

    pub fn atom(location: f64, weight: f64) -> Result<Self> {
        let a = Atom::new(location, weight)?;
        let m = Self {
            parts: vec![MeasurePart::Atom(a)],
            label: String::new(),
        };
        Ok(m.relabeled())
    }

    /// Sum of two measures.
    pub fn plus(&self, other: &Measure) -> Measure {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().copied());
        Measure {
            parts,
            label: String::new(),
        }
        .relabeled()
    }

    fn relabeled(mut self) -> Self {
        self.label = self.to_string();
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn parts(&self) -> &[MeasurePart] {
        &self.parts
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| match p {
            MeasurePart::Density(d) => d.scale == 0.0,
            MeasurePart::Atom(a) => a.weight == 0.0,
        })
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.parts.iter().filter_map(|p| match p {
            MeasurePart::Atom(a) => Some(a),
            _ => None,
        })
    }

    pub fn densities(&self) -> impl Iterator<Item = &Density> {
        self.parts.iter().filter_map(|p| match p {
            MeasurePart::Density(d) => Some(d),
            _ => None,
        })
    }

    /// True when the support stays a positive distance below 1.
    pub fn support_bounded_below_one(&self) -> bool {
        self.densities().all(|d| d.scale == 0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.tail_mass_c(1.0)
    }

    /// `μ([t, 1))`.
    pub fn tail_mass(&self, t: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return Err(domain(format!("tail mass needs 0 <= t < 1, got {t}")));
        }
        Ok(self.tail_mass_c(1.0 - t))
    }

    /// `μ([1 - tc, 1))`, accurate for tiny `tc`.
    pub fn tail_mass_c(&self, tc: f64) -> f64 {
        let t = 1.0 - tc;
        self.parts
            .iter()
            .map(|p| match p {
                MeasurePart::Density(d) => d.tail_c(tc),
                MeasurePart::Atom(a) => {
                    if a.location >= t || 1.0 - a.location <= tc {
                        a.weight
                    } else {
                        0.0
                    }
                }
            })
            .sum()
    }

    /// `μ` restricted to `(s, 1)`.
    pub fn restrict_tail(&self, s: f64) -> Result<Measure> {
        if !(s > 0.0 && s < 1.0) {
            return Err(domain(format!("restriction point must lie in (0,1), got {s}")));
        }
        let parts = self
            .parts
            .iter()
            .filter_map(|p| match p {
                MeasurePart::Density(d) => Some(MeasurePart::Density(Density {
                    lower: d.lower.max(s),
                    ..*d
                })),
                MeasurePart::Atom(a) if a.location > s => Some(MeasurePart::Atom(*a)),
                MeasurePart::Atom(_) => None,
            })
            .collect();
        Ok(Measure {
            parts,
            label: String::new(),
        }
        .relabeled())
    }

    /// Fine quadrature nodes (atoms included as exact nodes).
    pub fn nodes(&self, resolution: f64) -> Vec<Node> {
        self.nodes_with_width(resolution, PANEL_WIDTH)
    }

    /// A coarser rule on the same substitution, used for error estimates.
    pub fn nodes_coarse(&self, resolution: f64) -> Vec<Node> {
        self.nodes_with_width(resolution, 2.0 * PANEL_WIDTH)
    }

    fn nodes_with_width(&self, resolution: f64, width: f64) -> Vec<Node> {
        let mut out = Vec::new();
        for p in &self.parts {
            match p {
                MeasurePart::Density(d) => out.extend(d.nodes(resolution, width)),
                MeasurePart::Atom(a) => {
                    if a.weight > 0.0 {
                        out.push(a.node());
                    }
                }
            }
        }
        out
    }

    /// `μ_n` with an absolute error bound.
    pub fn moment(&self, n: usize) -> Result<(f64, f64)> {
        let table = MomentTable::new(self, n)?;
        Ok((table.values[n], table.err_bound[n]))
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "zero");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match p {
                MeasurePart::Density(d) => {
                    if d.beta == 0.0 {
                        write!(f, "poly:gamma={}", d.gamma)?;
                    } else {
                        write!(f, "polylog:gamma={},beta={}", d.gamma, d.beta)?;
                    }
                    if d.scale != 1.0 {
                        write!(f, ",scale={}", d.scale)?;
                    }
                    if d.lower != 0.0 {
                        write!(f, ",from={}", d.lower)?;
                    }
                }
                MeasurePart::Atom(a) => write!(f, "atom:t={},w={}", a.location, a.weight)?,
            }
        }
        Ok(())
    }
}

/// How moments are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentMethod {
    /// Closed forms where available, quadrature otherwise.
    #[default]
    Auto,
    /// Quadrature for every density part.
    Quadrature,
}

/// Moments `μ_0..=μ_N` with per-entry absolute error bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    values: Vec<f64>,
    err_bound: Vec<f64>,
}

const MOMENT_BLOCK: usize = 2048;

impl MomentTable {
    pub fn new(measure: &Measure, n_max: usize) -> Result<Self> {
        Self::with_method(measure, n_max, MomentMethod::Auto)
    }

    pub fn with_method(measure: &Measure, n_max: usize, method: MomentMethod) -> Result<Self> {
        let len = n_max + 1;
        let mut values = vec![0.0; len];
        let mut err_bound = vec![0.0; len];
        for part in measure.parts() {
            match part {
                MeasurePart::Atom(a) => add_atom_moments(a, &mut values, &mut err_bound),
                MeasurePart::Density(d) => {
                    if d.scale == 0.0 {
                        continue;
                    }
                    if method == MomentMethod::Auto && d.has_closed_moments() {
                        d.closed_moments(&mut values, &mut err_bound);
                    } else {
                        let resolution = n_max as f64;
                        let fine = power_sums(&d.nodes(resolution, PANEL_WIDTH), len);
                        let coarse = power_sums(&d.nodes(resolution, 2.0 * PANEL_WIDTH), len);
                        for i in 0..len {
                            values[i] += fine[i];
                            err_bound[i] += (fine[i] - coarse[i]).abs() + 64.0 * f64::EPSILON * fine[i].abs();
                        }
                    }
                }
            }
        }
        for v in values.iter() {
            if !v.is_finite() {
                return Err(Error::InfiniteMass("moment is not finite".into()));
            }
        }
        Ok(Self { values, err_bound })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn err_bound(&self) -> &[f64] {
        &self.err_bound
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// The first `n_max + 1` entries.
    pub fn prefix(&self, n_max: usize) -> Self {
        let len = (n_max + 1).min(self.values.len());
        Self {
            values: self.values[..len].to_vec(),
            err_bound: self.err_bound[..len].to_vec(),
        }
    }
}

fn add_atom_moments(a: &Atom, values: &mut [f64], errs: &mut [f64]) {
    if a.weight == 0.0 {
        return;
    }
    let mut p = a.weight;
    for (n, (v, e)) in values.iter_mut().zip(errs.iter_mut()).enumerate() {
        *v += p;
        *e += 2.0 * f64::EPSILON * (n as f64 + 1.0) * p;
        p *= a.location;
    }
}

/// `Σ_i w_i t_i^m` for `m < len`, in fixed-size blocks so the result does not
/// depend on the thread count.
fn power_sums(nodes: &[Node], len: usize) -> Vec<f64> {
    let logs: Vec<f64> = nodes.iter().map(|n| (-n.tc).ln_1p()).collect();
    let mut out = vec![0.0; len];
    out.par_chunks_mut(MOMENT_BLOCK)
        .enumerate()
        .for_each(|(b, chunk)| {
            let m0 = (b * MOMENT_BLOCK) as f64;
            let mut pw: Vec<f64> = nodes
                .iter()
                .zip(&logs)
                .map(|(n, l)| if m0 == 0.0 { n.w } else { n.w * (m0 * l).exp() })
                .collect();
            let ts: Vec<f64> = nodes.iter().map(|n| n.t).collect();
            for slot in chunk.iter_mut() {
                let mut s = 0.0;
                for (p, t) in pw.iter_mut().zip(&ts) {
                    s += *p;
                    *p *= t;
                }
                *slot = s;
            }
        });
    out
}

/// Geometric grid `t_j = 1 - r^j`, `j = 1..=len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailGrid {
    pub ratio: f64,
    pub len: usize,
}

impl Default for TailGrid {
    fn default() -> Self {
        Self { ratio: 0.5, len: 40 }
    }
}

impl TailGrid {
    pub fn new(ratio: f64, len: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(domain(format!("tail grid ratio must lie in (0,1), got {ratio}")));
        }
        if len < 16 {
            return Err(domain(format!("tail grid needs at least 16 points, got {len}")));
        }
        Ok(Self { ratio, len })
    }

    /// `1 - t_j = r^j`.
    pub fn complements(&self) -> Vec<f64> {
        (1..=self.len).map(|j| self.ratio.powi(j as i32)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegressionDiagnostics {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// First and last grid index (1-based `j`) of the fit window.
    pub window: (usize, usize),
    pub grid: TailGrid,
}

/// Outcome of [`classify_carleson`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CarlesonReport {
    /// Log order `β` used in the condition.
    pub beta: f64,
    /// Exponent at which the sup constant and vanishing verdict are evaluated.
    pub s: f64,
    pub s_hat: Option<f64>,
    pub beta_hat: Option<f64>,
    pub sup_constant: f64,
    pub vanishing: bool,
    /// Tail mass vanishes on the grid region closest to 1.
    pub compact_support: bool,
    /// Tail ratio at the last grid point over its value at the fit window start.
    pub ratio_decay: Option<f64>,
    pub diagnostics: Option<RegressionDiagnostics>,
}

/// Threshold for the finite vanishing test.
pub const DEFAULT_VANISHING_THRESHOLD: f64 = 0.1;

/// Estimates the Carleson exponent of `m` with log order `beta`.
///
/// `s` fixes the exponent for the sup constant and vanishing verdict; when
/// `None` the fitted `s_hat` is used.
pub fn classify_carleson(
    m: &Measure,
    beta: f64,
    grid: TailGrid,
    s: Option<f64>,
    threshold: f64,
) -> Result<CarlesonReport> {
    let grid = TailGrid::new(grid.ratio, grid.len)?;
    if !beta.is_finite() || beta < 0.0 {
        return Err(domain(format!("log order beta must be >= 0, got {beta}")));
    }
    let tcs = grid.complements();
    let tails: Vec<f64> = tcs.iter().map(|&tc| m.tail_mass_c(tc)).collect();
    let logfac = |tc: f64| 1.0 - tc.ln();
    let ratio_at = |j: usize, s: f64| tails[j] * logfac(tcs[j]).powf(beta) / tcs[j].powf(s);
    let start = grid.len / 2;

    if tails[start..].iter().any(|&v| v <= 0.0) {
        let s_eval = s.unwrap_or(0.0);
        let sup = (0..grid.len).map(|j| ratio_at(j, s_eval)).fold(0.0, f64::max);
        return Ok(CarlesonReport {
            beta,
            s: s_eval,
            s_hat: None,
            beta_hat: None,
            sup_constant: sup,
            vanishing: true,
            compact_support: true,
            ratio_decay: Some(0.0),
            diagnostics: None,
        });
    }

    let x: Vec<f64> = tcs[start..].iter().map(|tc| tc.ln()).collect();
    let ll: Vec<f64> = tcs[start..].iter().map(|&tc| logfac(tc).ln()).collect();
    let logt: Vec<f64> = tails[start..].iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = logt.iter().zip(&ll).map(|(a, b)| a + beta * b).collect();
    let line = fit::line(&x, &y).ok_or_else(|| Error::Degenerate("tail regression failed".into()))?;
    let beta_hat = fit::plane(&x, &ll, &logt).map(|(_, _, c2, _)| -c2);

    let s_eval = s.unwrap_or(line.slope);
    let sup = (0..grid.len).map(|j| ratio_at(j, s_eval)).fold(0.0, f64::max);
    let first = ratio_at(start, s_eval);
    let last = ratio_at(grid.len - 1, s_eval);
    let decay = last / first;
    Ok(CarlesonReport {
        beta,
        s: s_eval,
        s_hat: Some(line.slope),
        beta_hat,
        sup_constant: sup,
        vanishing: decay <= threshold,
        compact_support: false,
        ratio_decay: Some(decay),
        diagnostics: Some(RegressionDiagnostics {
            slope: line.slope,
            intercept: line.intercept,
            residual: line.residual,
            window: (start + 1, grid.len),
            grid,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    /// Plain adaptive Simpson on `[a, b]`, independent of the graded scheme.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let c = 0.5 * (a + b);
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
        fn rec<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let c = 0.5 * (a + b);
            let l = 0.5 * (a + c);
            let r = 0.5 * (c + b);
            let left = (c - a) / 6.0 * (f(a) + 4.0 * f(l) + f(c));
            let right = (b - c) / 6.0 * (f(c) + 4.0 * f(r) + f(b));
            if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, c, left, tol / 2.0, depth - 1) + rec(f, c, b, right, tol / 2.0, depth - 1)
            }
        }
        rec(f, a, b, whole, tol, depth)
    }

    #[test]
    fn moment_examples() {
        let leb = Measure::lebesgue();
        assert!((leb.moment(4).unwrap().0 - 0.2).abs() < 1e-15);
        let at = Measure::atom(0.5, 1.0).unwrap();
        assert_eq!(at.moment(3).unwrap().0, 0.125);
        let lin = Measure::poly(1.0).unwrap();
        let (v, e) = lin.moment(2).unwrap();
        let oracle = simpson(|t| t * t * (1.0 - t), 0.0, 1.0, 1e-14, 30);
        assert!((v - 1.0 / 12.0).abs() < 1e-15);
        assert!((v - oracle).abs() < 1e-12);
        assert!(e < 1e-14);
    }

    #[test]
    fn tail_examples() {
        assert!((Measure::lebesgue().tail_mass(0.9).unwrap() - 0.1).abs() < 1e-15);
        let half = Measure::poly(0.5).unwrap();
        let v = half.tail_mass(0.75).unwrap();
        assert!((v - 0.25f64.powf(1.5) / 1.5).abs() < 1e-15);
        let oracle = simpson(|t| (1.0 - t).sqrt(), 0.75, 1.0, 1e-13, 40);
        assert!((v - oracle).abs() < 1e-9);
        let two = Measure::atom(0.5, 1.0).unwrap().plus(&Measure::atom(0.25, 2.0).unwrap());
        assert_eq!(two.tail_mass(0.4).unwrap(), 1.0);
        assert!(Measure::lebesgue().tail_mass(1.0).is_err());
        assert!(Measure::lebesgue().tail_mass(-0.1).is_err());
    }

    #[test]
    fn atom_at_tail_point_is_included() {
        let m = Measure::atom(0.5, 3.0).unwrap();
        assert_eq!(m.tail_mass(0.5).unwrap(), 3.0);
        assert_eq!(m.tail_mass(0.500001).unwrap(), 0.0);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Measure::poly(-1.0), Err(Error::InfiniteMass(_))));
        assert!(Measure::poly(-1.5).is_err());
        assert!(Measure::atom(1.0, 1.0).is_err());
        assert!(Measure::atom(0.5, -1.0).is_err());
        assert!(Measure::density(0.0, 0.0, -2.0).is_err());
    }

    #[test]
    fn polylog_tail_matches_direct_integration() {
        let m = Measure::polylog(0.5, -1.0).unwrap();
        let dens = |t: f64| (1.0 - t).powf(0.5) / (1.0 - (1.0 - t).ln());
        for &t in &[0.0, 0.3, 0.9, 0.99] {
            let got = m.tail_mass(t).unwrap();
            let want = simpson(dens, t, 1.0, 1e-13, 45);
            assert!((got - want).abs() < 1e-8 * want.max(1e-3), "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn quadrature_moments_match_beta_closed_form() {
        for &g in &[-0.5, 0.0, 0.5, 1.0, 2.0] {
            let m = Measure::poly(g).unwrap();
            let closed = MomentTable::new(&m, 256).unwrap();
            let quad = MomentTable::with_method(&m, 256, MomentMethod::Quadrature).unwrap();
            for n in 0..=256 {
                let diff = (closed.get(n) - quad.get(n)).abs();
                let tol = closed.err_bound()[n] + quad.err_bound()[n] + 1e-14 * closed.get(n);
                assert!(diff <= tol, "gamma {g}, n {n}: diff {diff:e} tol {tol:e}");
            }
        }
    }

    #[test]
    fn quadrature_moments_far_out() {
        // μ_n of (1-t)^2 dt = 2/((n+1)(n+2)(n+3)); exercises the shifted cutoff.
        let m = Measure::poly(2.0).unwrap();
        let quad = MomentTable::with_method(&m, 200_000, MomentMethod::Quadrature).unwrap();
        for &n in &[0usize, 10, 1000, 50_000, 200_000] {
            let nf = n as f64;
            let want = 2.0 / ((nf + 1.0) * (nf + 2.0) * (nf + 3.0));
            assert!((quad.get(n) / want - 1.0).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn moments_monotone_and_consistent_with_tail() {
        let m = Measure::poly(1.0)
            .unwrap()
            .plus(&Measure::atom(0.5, 0.25).unwrap())
            .plus(&Measure::polylog(-0.5, 2.0).unwrap());
        let tab = MomentTable::new(&m, 2000).unwrap();
        for n in 0..2000 {
            assert!(tab.get(n + 1) <= tab.get(n) + tab.err_bound()[n]);
            assert!(tab.get(n) >= 0.0);
        }
        let mass = m.tail_mass(0.0).unwrap();
        assert!((tab.get(0) - mass).abs() < 1e-10 * mass);
    }

    #[test]
    fn restrict_tail_examples() {
        let r = Measure::lebesgue().restrict_tail(0.5).unwrap();
        assert!((r.total_mass() - 0.5).abs() < 1e-15);
        let z = Measure::atom(0.4, 1.0).unwrap().restrict_tail(0.5).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.total_mass(), 0.0);
        let lin = Measure::poly(1.0).unwrap().restrict_tail(0.5).unwrap();
        assert!((lin.tail_mass(0.7).unwrap() - 0.045).abs() < 1e-15);
        assert!((lin.tail_mass(0.2).unwrap() - 0.125).abs() < 1e-15);
        assert!(Measure::lebesgue().restrict_tail(0.0).is_err());
        assert!(Measure::lebesgue().restrict_tail(1.0).is_err());
    }

    #[test]
    fn restricted_moments_agree_with_clipping() {
        let m = Measure::poly(0.5).unwrap();
        let r = m.restrict_tail(0.6).unwrap();
        let tab = MomentTable::new(&r, 40).unwrap();
        let rule = GaussLegendre::new(16);
        for &n in &[0usize, 1, 7, 40] {
            let want: f64 = (0..64)
                .map(|k| {
                    let a = 0.6 + 0.4 * k as f64 / 64.0;
                    let b = 0.6 + 0.4 * (k + 1) as f64 / 64.0;
                    let s = |t: f64| t.powi(n as i32) * (1.0 - t).sqrt();
                    if k == 63 {
                        simpson(s, a, b, 1e-15, 50)
                    } else {
                        rule.integrate(a, b, s)
                    }
                })
                .sum();
            assert!((tab.get(n) - want).abs() < 1e-10, "n={n}: {} vs {want}", tab.get(n));
        }
    }

    #[test]
    fn restrict_composes() {
        let m = Measure::poly(1.0).unwrap().plus(&Measure::atom(0.7, 1.0).unwrap());
        let a = m.restrict_tail(0.3).unwrap().restrict_tail(0.6).unwrap();
        let b = m.restrict_tail(0.6).unwrap();
        let ta = MomentTable::new(&a, 64).unwrap();
        let tb = MomentTable::new(&b, 64).unwrap();
        for n in 0..=64 {
            assert!((ta.get(n) - tb.get(n)).abs() <= ta.err_bound()[n] + tb.err_bound()[n] + 1e-15);
        }
    }

    #[test]
    fn classify_power_density() {
        let m = Measure::poly(0.5).unwrap();
        let rep = classify_carleson(&m, 0.0, TailGrid::default(), Some(1.0), 0.1).unwrap();
        assert!((rep.s_hat.unwrap() - 1.5).abs() < 0.02);
        assert!(rep.vanishing);
        assert!(!rep.compact_support);
        assert!(rep.sup_constant >= 0.0);
    }

    #[test]
    fn classify_compact_support() {
        let m = Measure::atom(0.5, 1.0).unwrap();
        let rep = classify_carleson(&m, 0.0, TailGrid::default(), Some(3.0), 0.1).unwrap();
        assert!(rep.compact_support);
        assert!(rep.vanishing);
        assert!(rep.s_hat.is_none());
        // sup over t <= 0.5 of 1/(1-t)^3 = 8
        assert!((rep.sup_constant - 8.0).abs() < 1e-12);
    }

    #[test]
    fn classify_log_density() {
        let m = Measure::polylog(0.5, -1.0).unwrap();
        let rep = classify_carleson(&m, 1.0, TailGrid::default(), None, 0.1).unwrap();
        assert!((rep.s_hat.unwrap() - 1.5).abs() < 0.02, "{:?}", rep.s_hat);
        assert!((rep.beta_hat.unwrap() - 1.0).abs() < 0.1, "{:?}", rep.beta_hat);
    }

    #[test]
    fn non_vanishing_at_exact_exponent() {
        let m = Measure::density(1.0, 0.0, 2.0).unwrap();
        let rep = classify_carleson(&m, 0.0, TailGrid::default(), Some(2.0), 0.1).unwrap();
        assert!(!rep.vanishing);
        assert!((rep.sup_constant - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_validation() {
        assert!(TailGrid::new(1.0, 20).is_err());
        assert!(TailGrid::new(0.5, 10).is_err());
        let m = Measure::lebesgue();
        assert!(classify_carleson(&m, 0.0, TailGrid { ratio: 0.5, len: 8 }, None, 0.1).is_err());
    }

    #[test]
    fn display_round_trip_shape() {
        let m = Measure::poly(1.0).unwrap().plus(&Measure::atom(0.5, 0.25).unwrap());
        assert_eq!(m.to_string(), "poly:gamma=1 + atom:t=0.5,w=0.25");
        let r = Measure::polylog(0.5, -1.0).unwrap().restrict_tail(0.25).unwrap();
        assert_eq!(r.to_string(), "polylog:gamma=0.5,beta=-1,from=0.25");
    }
}
