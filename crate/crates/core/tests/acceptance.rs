//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use hardylab::analytic::{hardy_norm, CoefficientFunction, Discretization};
use hardylab::measures::Measure;
use hardylab::operators::{
    apply_integral, hilbert_inequality_check, hilbert_schmidt_integral, hilbert_schmidt_sum, z_grid, HankelOperator,
    DEFAULT_HS_TRUNCATION, DEFAULT_TRUNCATION,
};
use hardylab::probes::{boundedness_probe, compactness_probe, essential_norm_proxy, norm_series, ProbeConfig};
use hardylab::special::{kernel_integral_g, GammaRatioSeq};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_equivalence() -> Outcome {
    let start = Instant::now();
    let n = DEFAULT_TRUNCATION;
    let zs = z_grid(0.9, 9, 16);
    let measures = [Measure::lebesgue(), Measure::poly(1.0).unwrap(), Measure::atom(0.5, 1.0).unwrap()];
    let fs = [
        CoefficientFunction::monomial(0, n).unwrap(),
        CoefficientFunction::family_fa(1.0, 0.8, n).unwrap(),
        CoefficientFunction::family_ga(0.5, n).unwrap(),
    ];
    let mut worst = (0.0f64, String::new());
    for alpha in [0.5, 1.0, 1.5, 2.0] {
        for m in &measures {
            let op = HankelOperator::new(alpha, m.clone(), n).unwrap();
            for f in &fs {
                let out = op.apply(f).unwrap().output;
                for &z in &zs {
                    let h = out.evaluate(z).unwrap();
                    let i = apply_integral(alpha, m, f, z).unwrap().value();
                    let d = (h - i).norm();
                    if d > worst.0 {
                        worst = (d, format!("alpha={alpha}, {m}, f={f}, z={z}"));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst.0 <= 1e-6 && secs < 30.0,
        format!("max |Hankel - integral| = {:.3e} at {} ({secs:.1} s, limit 30 s)", worst.0, worst.1),
    )
}

fn c2_closed_forms() -> Outcome {
    let one = CoefficientFunction::monomial(0, 0).unwrap();
    let leb = Measure::lebesgue();
    let mut dev = 0.0f64;
    for z in z_grid(0.9, 9, 16) {
        let v = apply_integral(2.0, &leb, &one, z).unwrap().value();
        let want = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z);
        dev = dev.max((v - want).norm());
    }
    let mut norm_dev = 0.0f64;
    for a in [0.5, 0.9, 0.99] {
        for p in [0.5, 1.0, 2.0] {
            let f = CoefficientFunction::family_fa(p, a, DEFAULT_TRUNCATION).unwrap();
            let v = hardy_norm(&f, p, &Discretization::default()).unwrap().value;
            norm_dev = norm_dev.max((v - 1.0).abs());
        }
    }
    outcome(
        dev <= 1e-8 && norm_dev <= 1e-6,
        format!("integral vs 1/(1-z): {dev:.3e} (tol 1e-8); max |‖f_a‖ - 1|: {norm_dev:.3e} (tol 1e-6)"),
    )
}

fn c3_stirling() -> Outcome {
    let n = 10_000;
    let mut lines = Vec::new();
    let mut pass = true;
    for alpha in [0.5, 1.5, 2.0, 3.0] {
        let c = GammaRatioSeq::new(alpha, n).unwrap().get(n);
        let r = c * statrs::function::gamma::gamma(alpha) / (n as f64).powf(alpha - 1.0);
        pass &= (0.99..=1.01).contains(&r);
        lines.push(format!("{alpha}:{r:.6}"));
    }
    outcome(pass, format!("c_n Γ(α)/n^(α-1) at n=1e4 = [{}] (band [0.99, 1.01])", lines.join(", ")))
}

fn c4_kernel_regimes() -> Outcome {
    let grid: Vec<f64> = (1..=10).map(|j| 1.0 - 2f64.powi(-j)).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for tau in [1.0, 0.5, 0.0, -0.5] {
        let vals: Vec<f64> = grid
            .iter()
            .map(|&a| {
                let g = kernel_integral_g(Complex64::new(a, 0.0), tau).unwrap();
                let w = 1.0 - a * a;
                if tau > 0.0 {
                    g * w.powf(tau)
                } else if tau == 0.0 {
                    g / (std::f64::consts::E / w).ln()
                } else {
                    g
                }
            })
            .collect();
        let hi = vals.iter().cloned().fold(f64::MIN, f64::max);
        let lo = vals.iter().cloned().fold(f64::MAX, f64::min);
        let ratio = hi / lo;
        pass &= lo > 0.0 && ratio <= 8.0;
        parts.push(format!("τ={tau}: {ratio:.3}"));
    }
    outcome(pass, format!("band ratios on a = 1-2^-j, j<=10: {} (limit 8)", parts.join(", ")))
}

fn c5_hilbert_schmidt() -> Outcome {
    let mut agree = 0;
    let mut total = 0;
    let mut mismatches = Vec::new();
    let mut theory = 0;
    for gamma in [-0.5, 0.0, 0.5, 1.0, 2.0, 3.0] {
        for alpha in [0.5, 1.0, 1.5, 2.0] {
            let m = Measure::poly(gamma).unwrap();
            let sum = hilbert_schmidt_sum(alpha, &m, DEFAULT_HS_TRUNCATION).unwrap();
            let int = hilbert_schmidt_integral(alpha, &m).unwrap();
            total += 1;
            if sum.converges == int.converges {
                agree += 1;
            } else {
                mismatches.push(format!("(γ={gamma}, α={alpha})"));
            }
            if int.converges == (gamma > alpha - 1.0) {
                theory += 1;
            }
        }
    }
    let int = hilbert_schmidt_integral(1.0, &Measure::poly(1.0).unwrap()).unwrap();
    let value = int.value.unwrap_or(f64::NAN);
    let pin_ok = (value - 0.5).abs() <= 1e-8;
    let iff_ok = agree == total;
    outcome(
        iff_ok && pin_ok,
        format!(
            "sum/integral verdicts agree {agree}/{total}{}; verdicts match γ > α-1 in {theory}/{total}; \
             pin μ=(1-t)dt, α=1: integral = {value:.12} vs required 0.5 ± 1e-8 ({})",
            if mismatches.is_empty() { String::new() } else { format!(" (differ at {})", mismatches.join(" ")) },
            if pin_ok { "ok" } else { "closed form ∫(1-t)/2 dt = 0.25" }
        ),
    )
}

fn c6_bounded_slopes() -> Outcome {
    let start = Instant::now();
    let cfg = ProbeConfig::default();
    let unb = boundedness_probe(1.0, 1.0, 2.0, &Measure::lebesgue(), &cfg).unwrap();
    let bnd = boundedness_probe(1.0, 1.0, 2.0, &Measure::poly(1.0).unwrap(), &cfg).unwrap();
    let s1 = unb.fitted_slope.unwrap_or(f64::NAN);
    let s0 = bnd.fitted_slope.unwrap_or(f64::NAN);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        (s1 - 1.0).abs() <= 0.1 && s0.abs() <= 0.1 && secs < 120.0,
        format!("Lebesgue slope {s1:.4} (want 1 ± 0.1), (1-t)dt slope {s0:.4} (want 0 ± 0.1), {secs:.1} s (limit 120 s)"),
    )
}

fn c7_compactness() -> Outcome {
    let cfg = ProbeConfig::default();
    let a: Vec<f64> = (4..=12).map(|j| 1.0 - 2f64.powi(-j)).collect();
    let van = norm_series(1.0, 1.0, 2.0, &Measure::poly(1.5).unwrap(), &a, &cfg).unwrap();
    let drop = van[0].norm / van[van.len() - 1].norm;
    let ctl = norm_series(1.0, 1.0, 2.0, &Measure::density(1.0, 0.0, 2.0).unwrap(), &a, &cfg).unwrap();
    let spread = ctl
        .iter()
        .map(|g| g.norm / ctl[0].norm)
        .fold(1.0f64, |acc, r| acc.max(r).max(1.0 / r));
    let probe = compactness_probe(1.0, 1.0, 2.0, &Measure::poly(1.5).unwrap(), &cfg).unwrap();
    outcome(
        drop >= 10.0 && spread <= 2.0,
        format!(
            "(1-t)^1.5 dt: j=4 to j=12 drop {drop:.2}x (want >= 10); control max deviation from j=4 {spread:.3}x (want <= 2); probe verdict {:?}",
            probe.verdict
        ),
    )
}

fn c8_essential() -> Outcome {
    let cfg = ProbeConfig::default();
    let exact = essential_norm_proxy(1.0, 1.0, 2.0, &Measure::density(1.0, 0.0, 2.0).unwrap(), &cfg).unwrap();
    let van = essential_norm_proxy(1.0, 1.0, 2.0, &Measure::poly(1.5).unwrap(), &cfg).unwrap();
    let lo = exact.lower.unwrap_or(f64::NAN);
    let vl = van.lower.unwrap_or(f64::NAN);
    outcome(
        (lo - 1.0).abs() <= 0.05 && vl <= 0.05,
        format!(
            "tail ≡ (1-t)^2: lower proxy {lo:.6} (want 1 ± 0.05, upper {:.4}); (1-t)^1.5 dt: lower proxy {vl:.4} (want <= 0.05, upper {:.4})",
            exact.upper.unwrap_or(f64::NAN),
            van.upper.unwrap_or(f64::NAN)
        ),
    )
}

fn c9_hilbert_inequality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x4b1d);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let a: Vec<f64> = (0..64)
            .map(|k| match i % 4 {
                0 => rng.random::<f64>(),
                1 => rng.random::<f64>() / (k as f64 + 1.0).sqrt(),
                2 => rng.random::<f64>().powi(8),
                _ => rng.random::<f64>() / (k as f64 + 1.0),
            })
            .collect();
        worst = worst.max(hilbert_inequality_check(&a));
    }
    let basel = hilbert_inequality_check(&[1.0]);
    let pi2 = PI * PI;
    outcome(
        worst <= pi2 && (basel - pi2 / 6.0).abs() <= 1e-9,
        format!("max ratio over 1000 sequences {worst:.6} (bound π² = {pi2:.6}); basel {basel:.12} vs π²/6 = {:.12}", pi2 / 6.0),
    )
}

fn c10_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_hardylab");
    let cases: [&[&str]; 2] = [
        &["probe-bounded", "--p", "1", "--alpha", "2", "--measure", "poly:gamma=0"],
        &["probe-essential", "--p", "1", "--alpha", "2", "--measure", "polylog:gamma=1,beta=-1 + atom:t=0.9,w=0.5"],
    ];
    let mut pass = true;
    let mut bytes = 0;
    for args in cases {
        let run = |threads: &str| {
            Command::new(exe)
                .arg("--threads")
                .arg(threads)
                .args(args)
                .output()
                .expect("binary runs")
        };
        let a = run("1");
        let b = run("8");
        pass &= a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
        bytes += a.stdout.len();
    }
    outcome(pass, format!("two probes, --threads 1 vs 8, byte-identical JSON: {pass} ({bytes} bytes compared)"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", c1_equivalence),
        ("closed-form pins", c2_closed_forms),
        ("Stirling band", c3_stirling),
        ("kernel regimes", c4_kernel_regimes),
        ("Hilbert-Schmidt iff", c5_hilbert_schmidt),
        ("boundedness slopes", c6_bounded_slopes),
        ("compactness decay", c7_compactness),
        ("essential-norm proxy", c8_essential),
        ("Hilbert inequality", c9_hilbert_inequality),
        ("determinism", c10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("[{}] {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: {} of 10 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
