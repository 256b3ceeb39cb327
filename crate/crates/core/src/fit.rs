//! Least-squares helpers for log-log growth fits.

use serde::{Deserialize, Serialize};

/// Straight-line fit `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub points: usize,
}

pub fn line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Some(LineFit {
        slope,
        intercept,
        residual: (ss / nf).sqrt(),
        points: n,
    })
}

/// Fit `y ≈ c0 + c1·x1 + c2·x2`; returns `(c0, c1, c2, rms residual)`.
pub fn plane(x1: &[f64], x2: &[f64], y: &[f64]) -> Option<(f64, f64, f64, f64)> {
    let n = y.len();
    if n < 3 || x1.len() != n || x2.len() != n {
        return None;
    }
    let nf = n as f64;
    let m1 = x1.iter().sum::<f64>() / nf;
    let m2 = x2.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let a = x1[i] - m1;
        let b = x2[i] - m2;
        let c = y[i] - my;
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
        s1y += a * c;
        s2y += b * c;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() <= 1e-14 * s11 * s22 {
        return None;
    }
    let c1 = (s1y * s22 - s2y * s12) / det;
    let c2 = (s2y * s11 - s1y * s12) / det;
    let c0 = my - c1 * m1 - c2 * m2;
    let ss: f64 = (0..n)
        .map(|i| (y[i] - c0 - c1 * x1[i] - c2 * x2[i]).powi(2))
        .sum();
    Some((c0, c1, c2, (ss / nf).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 - 0.5 * v).collect();
        let fit = line(&x, &y).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-14);
        assert!((fit.intercept - 3.0).abs() < 1e-13);
        assert!(fit.residual < 1e-13);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(line(&[1.0], &[2.0]).is_none());
        assert!(line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
    }

    #[test]
    fn recovers_exact_plane() {
        let x1: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let x2: Vec<f64> = x1.iter().map(|v| (1.0 + v).ln()).collect();
        let y: Vec<f64> = (0..12).map(|i| 1.0 + 2.0 * x1[i] - 0.7 * x2[i]).collect();
        let (c0, c1, c2, r) = plane(&x1, &x2, &y).unwrap();
        assert!((c0 - 1.0).abs() < 1e-10);
        assert!((c1 - 2.0).abs() < 1e-10);
        assert!((c2 + 0.7).abs() < 1e-10);
        assert!(r < 1e-10);
    }
}
