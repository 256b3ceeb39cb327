//! FFT helpers: circle sampling of power series and linear correlation.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Values `f(r·e^{2πij/m})`, `j = 0..m`, of the polynomial with coefficients
/// `coeffs`. Coefficients are folded modulo `m` first, so the samples are exact
/// for any degree.
pub fn circle_values(coeffs: &[Complex64], r: f64, m: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let lr = r.ln();
    for (k, a) in coeffs.iter().enumerate() {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = if r == 1.0 || k == 0 {
            1.0
        } else {
            (k as f64 * lr).exp()
        };
        buf[k % m] += a * w;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(m).process(&mut buf);
    buf
}

/// Linear convolution of two real sequences.
pub fn convolve(x: &[f64], y: &[f64]) -> Vec<f64> {
    let y: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    convolve_complex(x, &y).iter().map(|c| c.re).collect()
}

/// Linear convolution of a real sequence with a complex one.
pub fn convolve_complex(x: &[f64], y: &[Complex64]) -> Vec<Complex64> {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let len = x.len() + y.len() - 1;
    let m = len.next_power_of_two();
    let mut a: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    a.resize(m, Complex64::new(0.0, 0.0));
    let mut b = y.to_vec();
    b.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(m);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (u, v) in a.iter_mut().zip(&b) {
        *u *= v;
    }
    planner.plan_fft_inverse(m).process(&mut a);
    let scale = 1.0 / m as f64;
    a.truncate(len);
    a.iter_mut().for_each(|c| *c *= scale);
    a
}
