//! The Hankel coefficient action `H_{μ,α}`, the integral action `I_{μ,α}`,
//! and the Hilbert-Schmidt functionals.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{CoefficientFunction, Family, Tail};
use crate::error::{domain, Error, Result};
use crate::fft::convolve_complex;
use crate::fit;
use crate::measures::{classify_carleson, Measure, MeasurePart, MomentTable, TailGrid};
use crate::quadrature::{exponential_cutoff, Node, PANEL_WIDTH};
use crate::special::GammaRatioSeq;

/// Default truncation order for the matrix action.
pub const DEFAULT_TRUNCATION: usize = 4096;

/// Default truncation for the Hilbert-Schmidt partial sums.
pub const DEFAULT_HS_TRUNCATION: usize = 1 << 16;

/// Above this order [`ProductMethod::Auto`] switches to the FFT product.
pub const FFT_THRESHOLD: usize = 8192;

/// Base block for pairwise summation.
const PAIRWISE_BLOCK: usize = 32;

/// Relative dyadic increment below which a partial-sum sequence converges.
pub const HS_INCREMENT_TOL: f64 = 1e-3;

/// Endpoint slope (in `u = -log(1-t)`) below which the HS integral converges.
pub const HS_SLOPE_TOL: f64 = -0.05;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMethod {
    #[default]
    Auto,
    Naive,
    Fft,
}

/// `H_{μ,α}` truncated at order `N`, stored as `(c_{n,α}, μ_m)`.
#[derive(Debug, Clone)]
pub struct HankelOperator {
    alpha: f64,
    measure: Measure,
    n: usize,
    c: GammaRatioSeq,
    moments: MomentTable,
}

impl HankelOperator {
    pub fn new(alpha: f64, measure: Measure, n: usize) -> Result<Self> {
        let c = GammaRatioSeq::new(alpha, n)?;
        let moments = MomentTable::new(&measure, 2 * n + 1)?;
        Ok(Self {
            alpha,
            measure,
            n,
            c,
            moments,
        })
    }

    /// Reuses a precomputed moment table covering indices up to `2N+1`.
    pub fn with_moments(alpha: f64, measure: Measure, n: usize, moments: &MomentTable) -> Result<Self> {
        if moments.max_index() < 2 * n + 1 {
            return Err(domain(format!(
                "moment table reaches {} but order {n} needs {}",
                moments.max_index(),
                2 * n + 1
            )));
        }
        Ok(Self {
            alpha,
            measure,
            n,
            c: GammaRatioSeq::new(alpha, n)?,
            moments: moments.prefix(2 * n + 1),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn gamma_ratios(&self) -> &GammaRatioSeq {
        &self.c
    }

    pub fn moments(&self) -> &MomentTable {
        &self.moments
    }

    /// `μ_{n,k,α} = c_{n,α} μ_{n+k}`.
    pub fn entry(&self, n: usize, k: usize) -> Option<f64> {
        if n > self.n || k > self.n {
            return None;
        }
        Some(self.c.get(n) * self.moments.get(n + k))
    }

    pub fn apply(&self, f: &CoefficientFunction) -> Result<ApplyReport> {
        self.apply_with(f, ProductMethod::Auto)
    }

    pub fn apply_with(&self, f: &CoefficientFunction, method: ProductMethod) -> Result<ApplyReport> {
        let n = self.n;
        let keep = f.truncation().min(n);
        let mut a: Vec<Complex64> = f.coeffs()[..=keep].to_vec();
        a.resize(n + 1, ZERO);
        let dropped: f64 = f.coeffs().get(n + 1..).map_or(0.0, |s| s.iter().map(|v| v.norm()).sum());
        let extra = dropped + f.l1_tail();
        if !extra.is_finite() {
            return Err(Error::Divergent(format!(
                "the coefficient tail of {f} beyond N = {n} is not summable, so the inner sums \
                 Σ_k μ_(n+k) a_k cannot be bounded; the series and integral forms agree only when \
                 μ is a 1/p-Carleson measure for the H^p input"
            )));
        }
        let tail_bound = if extra == 0.0 {
            0.0
        } else {
            (0..=n)
                .map(|i| self.c.get(i) * self.moments.get(i + n + 1))
                .fold(0.0, f64::max)
                * extra
        };
        let resolved = match method {
            ProductMethod::Auto if n > FFT_THRESHOLD => ProductMethod::Fft,
            ProductMethod::Auto => ProductMethod::Naive,
            m => m,
        };
        let y = match resolved {
            ProductMethod::Fft => self.product_fft(&a),
            _ => self.product_naive(&a),
        };
        Ok(ApplyReport {
            output: CoefficientFunction::from_series(y),
            truncation_tail_bound: tail_bound,
            input_class: InputClass {
                family: f.family(),
                truncation: f.truncation(),
                tail: f.tail(),
            },
            method: resolved,
        })
    }

    /// Row-parallel product; each row sums pairwise in a fixed order.
    fn product_naive(&self, a: &[Complex64]) -> Vec<Complex64> {
        let mu = self.moments.values();
        (0..=self.n)
            .into_par_iter()
            .map(|i| pairwise(0, a.len(), &|k| a[k] * mu[i + k]) * self.c.get(i))
            .collect()
    }

    /// Correlation of the moments with the input by one FFT convolution.
    fn product_fft(&self, a: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let rev: Vec<Complex64> = a.iter().rev().copied().collect();
        let conv = convolve_complex(&self.moments.values()[..=2 * n], &rev);
        (0..=n).map(|i| conv[n + i] * self.c.get(i)).collect()
    }
}

fn pairwise(lo: usize, hi: usize, term: &dyn Fn(usize) -> Complex64) -> Complex64 {
    if hi - lo <= PAIRWISE_BLOCK {
        let mut s = ZERO;
        for k in lo..hi {
            s += term(k);
        }
        s
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise(lo, mid, term) + pairwise(mid, hi, term)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InputClass {
    pub family: Family,
    pub truncation: usize,
    pub tail: Tail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ApplyReport {
    pub output: CoefficientFunction,
    /// Bound on the contribution of the input coefficients `k > N`.
    pub truncation_tail_bound: f64,
    pub input_class: InputClass,
    pub method: ProductMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegralReport {
    pub re: f64,
    pub im: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl IntegralReport {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Smallest scale in `1-t` the integrand of `I_{μ,α}` varies on.
fn integral_resolution(f: &CoefficientFunction, z: Complex64) -> f64 {
    let kernel = 1.0 / (Complex64::new(1.0, 0.0) - z).norm();
    let func = match f.family() {
        Family::FA { a, .. } | Family::GA { a } => 1.0 / (1.0 - a),
        Family::Monomial { n } => n as f64,
        Family::Custom => f.truncation() as f64,
    };
    kernel.max(func)
}

fn integral_sum(alpha: f64, f: &CoefficientFunction, z: Complex64, nodes: &[Node]) -> Result<(Complex64, f64)> {
    let one_minus_z = Complex64::new(1.0, 0.0) - z;
    let mut s = ZERO;
    let mut mag = 0.0;
    for nd in nodes {
        let w = one_minus_z + z * nd.tc;
        assert!(w.re > 0.0, "1 - tz left the right half-plane");
        let term = f.value_on_segment(nd.t, nd.tc)? * (-alpha * w.ln()).exp() * nd.w;
        mag += term.norm();
        s += term;
    }
    Ok((s, mag))
}

/// `I_{μ,α}(f)(z) = ∫ f(t) (1-tz)^{-α} dμ(t)`.
pub fn apply_integral(alpha: f64, measure: &Measure, f: &CoefficientFunction, z: Complex64) -> Result<IntegralReport> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(z.norm() < 1.0) {
        return Err(domain(format!("integral form needs |z| < 1, got {}", z.norm())));
    }
    let res = integral_resolution(f, z);
    let (fine, mag) = integral_sum(alpha, f, z, &measure.nodes(res))?;
    let (coarse, _) = integral_sum(alpha, f, z, &measure.nodes_coarse(res))?;
    let err = (fine - coarse).norm() + 64.0 * f64::EPSILON * mag;
    Ok(IntegralReport {
        re: fine.re,
        im: fine.im,
        error_estimate: err,
        converged: err <= 1e-9 * fine.norm().max(1.0),
    })
}

/// Points `r e^{iθ}` with `r = zmax·i/radial`, `θ = 2πj/angular`.
pub fn z_grid(zmax: f64, radial: usize, angular: usize) -> Vec<Complex64> {
    let mut g = vec![ZERO];
    for i in 1..=radial {
        let r = zmax * i as f64 / radial as f64;
        for j in 0..angular {
            g.push(Complex64::from_polar(r, 2.0 * std::f64::consts::PI * j as f64 / angular as f64));
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EquivalenceReport {
    pub max_deviation: f64,
    pub worst_z: [f64; 2],
    pub points: usize,
    /// Carleson exponent the input's Hardy space requires.
    pub required_exponent: f64,
    pub hypothesis_holds: bool,
    pub warning: Option<String>,
}

/// Exponent band inside which a fitted Carleson exponent counts as meeting a threshold.
pub const EXPONENT_BAND: f64 = 0.05;

/// The Carleson exponent under which the two forms agree for `f ∈ H^p`.
pub fn equivalence_exponent(f: &CoefficientFunction) -> f64 {
    match f.family() {
        Family::FA { p, .. } if p <= 1.0 => 1.0 / p,
        _ => 1.0,
    }
}

/// Whether `μ` is (numerically) `s`-Carleson.
pub fn is_carleson(measure: &Measure, s: f64) -> Result<bool> {
    let rep = classify_carleson(measure, 0.0, TailGrid::default(), Some(s), 0.1)?;
    Ok(rep.compact_support || rep.s_hat.is_some_and(|v| v >= s - EXPONENT_BAND))
}

/// Max relative deviation between the Hankel series and the integral form.
pub fn equivalence_check(
    alpha: f64,
    measure: &Measure,
    f: &CoefficientFunction,
    z_points: &[Complex64],
    n: usize,
) -> Result<EquivalenceReport> {
    if z_points.is_empty() {
        return Err(domain("equivalence check needs at least one z"));
    }
    let s = equivalence_exponent(f);
    let holds = is_carleson(measure, s)?;
    let op = HankelOperator::new(alpha, measure.clone(), n)?;
    let input = if f.has_closed_form() { f.with_truncation(n)? } else { f.clone() };
    let out = op.apply(&input)?.output;
    let devs: Vec<f64> = z_points
        .par_iter()
        .map(|&z| -> Result<f64> {
            let h = out.evaluate(z)?;
            let i = apply_integral(alpha, measure, f, z)?.value();
            Ok((h - i).norm() / i.norm().max(f64::MIN_POSITIVE))
        })
        .collect::<Result<_>>()?;
    let (idx, max) = devs
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
    Ok(EquivalenceReport {
        max_deviation: max,
        worst_z: [z_points[idx].re, z_points[idx].im],
        points: z_points.len(),
        required_exponent: s,
        hypothesis_holds: holds,
        warning: (!holds).then(|| {
            format!("measure does not appear to be {s}-Carleson; the two forms need not agree")
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HsSumReport {
    pub partial_sum: f64,
    pub tail_estimate: f64,
    pub converges: bool,
    pub truncation: usize,
    /// `(N_j, S(N_j))` at dyadic orders.
    pub dyadic: Vec<(usize, f64)>,
    pub final_increment: f64,
}

/// `Σ_{n,k<=N} μ_{n,k,α}²` with dyadic divergence detection.
pub fn hilbert_schmidt_sum(alpha: f64, measure: &Measure, n: usize) -> Result<HsSumReport> {
    if n < 4 {
        return Err(domain(format!("Hilbert-Schmidt sum needs N >= 4, got {n}")));
    }
    let c = GammaRatioSeq::new(alpha, n)?;
    let mu = MomentTable::new(measure, 2 * n)?;
    // Suffix sums accumulate from the small end, so late μ_m² are not absorbed.
    let vals = mu.values();
    let mut suf = vec![0.0; vals.len() + 1];
    for m in (0..vals.len()).rev() {
        suf[m] = suf[m + 1] + vals[m] * vals[m];
    }
    let partial = |big: usize| -> f64 {
        (0..=big)
            .map(|j| {
                let cj = c.get(j);
                cj * cj * (suf[j] - suf[j + big + 1])
            })
            .sum()
    };
    let mut orders: Vec<usize> = std::iter::successors(Some(1usize), |&k| (k * 2 <= n).then_some(k * 2)).collect();
    if *orders.last().unwrap() != n {
        orders.push(n);
    }
    let dyadic: Vec<(usize, f64)> = orders.iter().map(|&k| (k, partial(k))).collect();
    let len = dyadic.len();
    let total = dyadic[len - 1].1;
    let last_inc = dyadic[len - 1].1 - dyadic[len - 2].1;
    let prev_inc = dyadic[len - 2].1 - dyadic[len - 3].1;
    let final_increment = if total > 0.0 { last_inc / total } else { 0.0 };
    let converges = final_increment < HS_INCREMENT_TOL;
    let tail_estimate = if !converges {
        f64::INFINITY
    } else if prev_inc > 0.0 && last_inc < prev_inc {
        let q = last_inc / prev_inc;
        last_inc * q / (1.0 - q)
    } else {
        last_inc
    };
    Ok(HsSumReport {
        partial_sum: total,
        tail_estimate,
        converges,
        truncation: n,
        dyadic,
        final_increment,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HsIntegralReport {
    pub value: Option<f64>,
    pub converges: bool,
    /// Slope of the log-integrand in `u = -log(1-t)` near the endpoint.
    pub endpoint_slope: Option<f64>,
    pub error_estimate: f64,
}

/// `∫ μ([t,1)) / (1-t)^{2α} dμ(t)` with endpoint divergence detection.
pub fn hilbert_schmidt_integral(alpha: f64, measure: &Measure) -> Result<HsIntegralReport> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    let two_a = 2.0 * alpha;
    let integrand = |tc: f64| measure.tail_mass_c(tc) * tc.powf(-two_a);
    let atoms: f64 = measure
        .atoms()
        .filter(|a| a.weight > 0.0)
        .map(|a| a.weight * integrand(1.0 - a.location))
        .sum();

    let mut slope: Option<f64> = None;
    let mut fine = 0.0;
    let mut coarse = 0.0;
    let mut mag = 0.0;
    for part in measure.parts() {
        let MeasurePart::Density(d) = part else { continue };
        if d.scale == 0.0 {
            continue;
        }
        let delta = d.width();
        let w1 = (250.0 / (2.0 * (d.gamma + 1.0))).min(60.0);
        let (us, logs): (Vec<f64>, Vec<f64>) = (0..=30)
            .map(|i| w1 * (0.5 + i as f64 / 60.0))
            .filter_map(|u| {
                let tc = delta * (-u).exp();
                let v = measure.tail_mass_c(tc).ln() - two_a * tc.ln() + d.value_at(tc).ln() + tc.ln();
                v.is_finite().then_some((u, v))
            })
            .unzip();
        let fitted = fit::line(&us, &logs)
            .ok_or_else(|| Error::Degenerate("endpoint slope fit failed".into()))?
            .slope;
        slope = Some(slope.map_or(fitted, |s: f64| s.max(fitted)));
        if fitted >= HS_SLOPE_TOL {
            continue;
        }
        let u_max = exponential_cutoff(d.gamma + 1.0, d.beta, -delta.ln(), 40.0)
            .max(60.0 / -fitted + 10.0)
            .min(600.0);
        let sum = |nodes: Vec<Node>| -> (f64, f64) {
            let mut s = 0.0;
            let mut m = 0.0;
            for nd in nodes {
                let tail = measure.tail_mass_c(nd.tc);
                let v = (tail.ln() + nd.w.ln() - two_a * nd.tc.ln()).exp();
                s += v;
                m += v.abs();
            }
            (s, m)
        };
        let (f, m) = sum(d.nodes_to(u_max, PANEL_WIDTH));
        let (c, _) = sum(d.nodes_to(u_max, 2.0 * PANEL_WIDTH));
        fine += f;
        coarse += c;
        mag += m;
    }
    let converges = slope.is_none_or(|s| s < HS_SLOPE_TOL);
    Ok(HsIntegralReport {
        value: converges.then_some(atoms + fine),
        converges,
        endpoint_slope: slope,
        error_estimate: if converges {
            (fine - coarse).abs() + 64.0 * f64::EPSILON * (mag + atoms)
        } else {
            f64::INFINITY
        },
    })
}

/// `ψ'(x)` for `x > 0`.
fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 64.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x
        + x2 / 2.0
        + x2 / x * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)))
}

/// `Σ_n (Σ_k |a_k|/(n+k+1))² / Σ_k |a_k|²`, with the outer sum over all `n >= 0`.
pub fn hilbert_inequality_check(a: &[f64]) -> f64 {
    let b: Vec<f64> = a.iter().map(|v| v.abs()).collect();
    let denom: f64 = b.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return 0.0;
    }
    let len = b.len();
    let m = (4 * len).max(64);
    // n = 0..=m directly
    let head: f64 = (0..=m)
        .map(|n| {
            let inner: f64 = b.iter().enumerate().map(|(k, v)| v / (n + k + 1) as f64).sum();
            inner * inner
        })
        .sum();
    // n > m in closed form: Σ_{n>m} 1/((n+k+1)(n+l+1))
    let mut tail = 0.0;
    for k in 0..len {
        if b[k] == 0.0 {
            continue;
        }
        tail += b[k] * b[k] * trigamma((m + k + 2) as f64);
        let mut harmonic = 0.0;
        for l in k + 1..len {
            harmonic += 1.0 / (m + l + 1) as f64;
            tail += 2.0 * b[k] * b[l] * harmonic / (l - k) as f64;
        }
    }
    (head + tail) / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{frac_diff, FracDiffMultiplier};

    fn one(n: usize) -> CoefficientFunction {
        CoefficientFunction::monomial(0, n).unwrap()
    }

    #[test]
    fn entries_factor_through_moments() {
        let m = Measure::poly(0.5).unwrap().plus(&Measure::atom(0.3, 0.5).unwrap());
        let op = HankelOperator::new(1.5, m, 64).unwrap();
        for n in 0..=64 {
            for k in 0..=64 {
                let e = op.entry(n, k).unwrap();
                assert!(e >= 0.0);
                assert_eq!(e, op.gamma_ratios().get(n) * op.moments().get(n + k));
                let ratio = e / op.gamma_ratios().get(n);
                assert!((ratio - op.moments().get(n + k)).abs() <= 2.0 * f64::EPSILON * ratio);
            }
        }
        assert!(op.entry(65, 0).is_none());
    }

    #[test]
    fn apply_examples() {
        let atom0 = Measure::atom(0.0, 1.0).unwrap();
        let f = CoefficientFunction::family_fa(1.0, 0.5, 32).unwrap();
        let out = HankelOperator::new(1.3, atom0, 32).unwrap().apply(&f).unwrap().output;
        assert!((out.coeffs()[0] - f.coeffs()[0]).norm() < 1e-16);
        assert!(out.coeffs()[1..].iter().all(|c| c.norm() == 0.0));

        let leb = Measure::lebesgue();
        let out = HankelOperator::new(1.0, leb.clone(), 100).unwrap().apply(&one(100)).unwrap();
        for (n, c) in out.output.coeffs().iter().enumerate() {
            assert!((c.re - 1.0 / (n as f64 + 1.0)).abs() < 1e-16);
        }
        assert_eq!(out.truncation_tail_bound, 0.0);
        let out = HankelOperator::new(2.0, leb, 100).unwrap().apply(&one(100)).unwrap();
        for c in out.output.coeffs() {
            assert!((c.re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn naive_and_fft_agree() {
        let m = Measure::poly(0.5).unwrap().plus(&Measure::atom(0.9, 0.2).unwrap());
        let op = HankelOperator::new(1.5, m, 3000).unwrap();
        let f = CoefficientFunction::family_fa(1.0, 0.99, 3000).unwrap();
        let a = op.apply_with(&f, ProductMethod::Naive).unwrap().output;
        let b = op.apply_with(&f, ProductMethod::Fft).unwrap().output;
        let scale = a.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn tail_bound_tracks_dropped_part() {
        let leb = Measure::lebesgue();
        let f = CoefficientFunction::family_fa(1.0, 0.99, 5000).unwrap();
        let full = HankelOperator::new(1.0, leb.clone(), 5000).unwrap().apply(&f).unwrap().output;
        let mut prev = f64::INFINITY;
        for n in [200usize, 400, 800, 1600] {
            let rep = HankelOperator::new(1.0, leb.clone(), n).unwrap().apply(&f).unwrap();
            let worst = rep
                .output
                .coeffs()
                .iter()
                .zip(full.coeffs())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(worst <= rep.truncation_tail_bound * (1.0 + 1e-9), "n={n}");
            assert!(rep.truncation_tail_bound < prev);
            prev = rep.truncation_tail_bound;
        }
    }

    #[test]
    fn non_summable_tail_is_rejected() {
        let f = CoefficientFunction::custom(vec![Complex64::new(1.0, 0.0); 8], Tail::Geometric { lead: 1.0, rho: 1.0 }).unwrap();
        let op = HankelOperator::new(1.0, Measure::lebesgue(), 8).unwrap();
        assert!(matches!(op.apply(&f), Err(Error::Divergent(_))));
    }

    #[test]
    fn intertwining_with_fractional_derivative() {
        let measures = [
            Measure::lebesgue(),
            Measure::poly(1.0).unwrap(),
            Measure::atom(0.5, 1.0).unwrap(),
            Measure::polylog(0.5, -1.0).unwrap(),
        ];
        let f = CoefficientFunction::family_ga(0.8, 512).unwrap();
        for m in &measures {
            let base = HankelOperator::new(1.0, m.clone(), 512).unwrap().apply(&f).unwrap().output;
            for alpha in [0.5, 1.5, 2.0, 3.0] {
                let direct = HankelOperator::new(alpha, m.clone(), 512).unwrap().apply(&f).unwrap().output;
                let mult = FracDiffMultiplier::hilbert(alpha, 512).unwrap();
                let via = frac_diff(&mult, &base).unwrap();
                for (x, y) in direct.coeffs().iter().zip(via.coeffs()) {
                    assert!((x - y).norm() <= 1e-10 * x.norm().max(1e-300));
                }
            }
        }
    }

    #[test]
    fn integral_examples() {
        let z = Complex64::new(0.5, 0.0);
        let v = apply_integral(1.0, &Measure::atom(0.5, 1.0).unwrap(), &one(4), z).unwrap();
        assert!((v.value() - Complex64::new(4.0 / 3.0, 0.0)).norm() < 1e-15);
        let v = apply_integral(2.0, &Measure::lebesgue(), &one(4), Complex64::new(0.3, 0.0)).unwrap();
        assert!((v.re - 1.0 / 0.7).abs() < 1e-12);
        assert!(v.converged);
        // ∫ f_{0.9}(t)(1-t) dt against plain Simpson on a fine mesh
        let f = CoefficientFunction::family_fa(1.0, 0.9, 16).unwrap();
        let v = apply_integral(2.0, &Measure::poly(1.0).unwrap(), &f, ZERO).unwrap();
        let g = |t: f64| 0.19 / (1.0 - 0.9 * t).powi(2) * (1.0 - t);
        let n = 200_000;
        let h = 1.0 / n as f64;
        let simpson: f64 = (0..n)
            .map(|i| {
                let a = i as f64 * h;
                h / 6.0 * (g(a) + 4.0 * g(a + h / 2.0) + g(a + h))
            })
            .sum();
        assert!((v.re - simpson).abs() < 1e-10);
        // closed form: 0.19/0.81·(ln 10 - 0.9)
        assert!((v.re - 0.19 / 0.81 * (10f64.ln() - 0.9)).abs() < 1e-13);
    }

    #[test]
    fn equivalence_examples() {
        let grid = z_grid(0.9, 3, 8);
        let rep = equivalence_check(1.7, &Measure::atom(0.5, 1.0).unwrap(), &one(8), &grid, 256).unwrap();
        assert!(rep.max_deviation < 1e-10);
        assert!(rep.hypothesis_holds);
        let rep = equivalence_check(2.0, &Measure::lebesgue(), &one(8), &grid, 4096).unwrap();
        assert!(rep.max_deviation < 1e-8);
        let f = CoefficientFunction::family_fa(1.0, 0.8, 64).unwrap();
        let rep = equivalence_check(1.5, &Measure::poly(0.5).unwrap(), &f, &grid, 4096).unwrap();
        assert!(rep.max_deviation < 1e-6, "{}", rep.max_deviation);
        assert!(rep.warning.is_none());
    }

    #[test]
    fn hypothesis_warning_is_reported() {
        let f = CoefficientFunction::family_fa(0.5, 0.5, 64).unwrap();
        let rep = equivalence_check(1.0, &Measure::lebesgue(), &f, &z_grid(0.5, 1, 4), 512).unwrap();
        assert!(!rep.hypothesis_holds);
        assert!(rep.warning.is_some());
        assert_eq!(rep.required_exponent, 2.0);
    }

    #[test]
    fn hs_sum_examples() {
        let rep = hilbert_schmidt_sum(1.0, &Measure::atom(0.5, 1.0).unwrap(), 1024).unwrap();
        assert!((rep.partial_sum - 16.0 / 9.0).abs() < 1e-12);
        assert!(rep.converges);
        let rep = hilbert_schmidt_sum(1.0, &Measure::lebesgue(), DEFAULT_HS_TRUNCATION).unwrap();
        assert!(!rep.converges);
        let rep = hilbert_schmidt_sum(1.0, &Measure::poly(1.0).unwrap(), DEFAULT_HS_TRUNCATION).unwrap();
        assert!(rep.converges);
        // direct double sum with μ_m = 1/((m+1)(m+2))
        let n = 300;
        let direct: f64 = (0..=n)
            .flat_map(|i| (0..=n).map(move |k| i + k))
            .map(|m| {
                let m = m as f64;
                1.0 / ((m + 1.0) * (m + 2.0)).powi(2)
            })
            .sum();
        let small = hilbert_schmidt_sum(1.0, &Measure::poly(1.0).unwrap(), n).unwrap();
        assert!((small.partial_sum - direct).abs() < 1e-13);
    }

    #[test]
    fn hs_sum_keeps_small_terms_at_the_threshold() {
        // γ = α - 1: partial sums grow by a fixed amount per doubling
        let rep = hilbert_schmidt_sum(2.0, &Measure::poly(1.0).unwrap(), DEFAULT_HS_TRUNCATION).unwrap();
        assert!(!rep.converges);
        let d = &rep.dyadic;
        let incs: Vec<f64> = d.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let last = incs[incs.len() - 1];
        let prev = incs[incs.len() - 2];
        assert!(last > 0.2 && (last / prev - 1.0).abs() < 0.01, "{incs:?}");
    }

    #[test]
    fn hs_integral_examples() {
        let rep = hilbert_schmidt_integral(1.0, &Measure::atom(0.5, 1.0).unwrap()).unwrap();
        assert_eq!(rep.value, Some(4.0));
        // ∫ ((1-t)²/2)/(1-t)² (1-t) dt = 1/4
        let rep = hilbert_schmidt_integral(1.0, &Measure::poly(1.0).unwrap()).unwrap();
        assert!((rep.value.unwrap() - 0.25).abs() < 1e-12, "{:?}", rep.value);
        let rep = hilbert_schmidt_integral(1.0, &Measure::lebesgue()).unwrap();
        assert!(!rep.converges);
        assert!(rep.value.is_none());
    }

    #[test]
    fn hs_integral_power_closed_form() {
        // density (1-t)^γ: ∫ (1-t)^{2γ+1-2α}/(γ+1) dt = 1/((γ+1)(2γ+2-2α))
        for &(g, a) in &[(0.5, 1.0), (2.0, 1.5), (3.0, 0.5), (1.0, 0.5)] {
            let rep = hilbert_schmidt_integral(a, &Measure::poly(g).unwrap()).unwrap();
            let want = 1.0 / ((g + 1.0) * (2.0 * g + 2.0 - 2.0 * a));
            assert!((rep.value.unwrap() / want - 1.0).abs() < 1e-10, "g={g} a={a}");
        }
    }

    #[test]
    fn hilbert_inequality_examples() {
        let basel = hilbert_inequality_check(&[1.0]);
        assert!((basel - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        assert_eq!(hilbert_inequality_check(&[0.0; 5]), 0.0);
        let direct = |a: &[f64]| {
            let mut s = 0.0;
            for n in 0..2_000_000usize {
                let inner: f64 = a.iter().enumerate().map(|(k, v)| v / (n + k + 1) as f64).sum();
                s += inner * inner;
            }
            s / a.iter().map(|v| v * v).sum::<f64>()
        };
        let a = [1.0, 0.5, 0.25, 2.0];
        assert!((hilbert_inequality_check(&a) - direct(&a)).abs() < 1e-5);
    }

    #[test]
    fn trigamma_values() {
        assert!((trigamma(1.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
        assert!((trigamma(0.5) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-12);
    }
}
