//! Gauss-Legendre rules and the composite panel scheme used to integrate
//! against densities with an endpoint singularity at `t = 1`.
//!
//! The singular endpoint is removed by the substitution `t = 1 - δ·e^{-u}`
//! (with `δ = 1 - lower`), which turns `(1-t)^γ` into an exponential in `u`
//! and makes every logarithmic factor polynomial in `u`.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Number of Gauss points per panel.
pub const PANEL_ORDER: usize = 16;

/// Width of a panel in the substituted variable `u`.
pub const PANEL_WIDTH: f64 = 0.5;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn standard() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(PANEL_ORDER))
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A quadrature node on `[lower, 1)`. `tc` holds `1 - t` exactly, which
/// matters once `t` rounds to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub tc: f64,
    pub w: f64,
}

/// Composite rule on `u ∈ [0, u_max]` with panels of width `width`.
pub fn composite_u(u_max: f64, width: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::standard();
    let panels = (u_max / width).ceil().max(1.0) as usize;
    let h = u_max / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.nodes.len());
    for j in 0..panels {
        let a = j as f64 * h;
        let mid = a + 0.5 * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}

/// Smallest `u` such that `e^{-c u} ((1+L+u)/(1+L))^β` falls below `e^{-decay}`.
pub fn exponential_cutoff(c: f64, beta: f64, log_base: f64, decay: f64) -> f64 {
    let mut u = decay / c;
    for _ in 0..20 {
        let corr = if beta > 0.0 {
            beta * ((1.0 + log_base + u) / (1.0 + log_base)).ln() / c
        } else {
            0.0
        };
        let next = decay / c + corr;
        if (next - u).abs() < 1e-9 {
            return next;
        }
        u = next;
    }
    u
}
