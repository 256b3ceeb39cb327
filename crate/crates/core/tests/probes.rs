use hardylab::measures::{classify_carleson, Measure, TailGrid};
use hardylab::probes::{
    boundedness_probe, compactness_probe, essential_norm_proxy, regime, ProbeConfig, RegimeKind, Verdict,
};

fn corpus() -> Vec<Measure> {
    vec![
        Measure::lebesgue(),
        Measure::poly(0.5).unwrap(),
        Measure::poly(1.0).unwrap(),
        Measure::poly(1.5).unwrap(),
        Measure::density(1.0, 0.0, 2.0).unwrap(),
        Measure::atom(0.5, 1.0).unwrap(),
        Measure::polylog(1.0, -1.0).unwrap(),
        Measure::poly(2.0).unwrap().plus(&Measure::atom(0.9, 0.5).unwrap()),
    ]
}

#[test]
fn boundedness_verdicts_follow_the_classifier() {
    let cfg = ProbeConfig::default();
    for m in corpus() {
        for alpha in [0.5, 1.5, 2.0] {
            let r = boundedness_probe(1.0, 1.0, alpha, &m, &cfg).unwrap();
            let reg = regime(1.0, 1.0, alpha).unwrap();
            let rep = classify_carleson(&m, 0.0, TailGrid::default(), None, 0.1).unwrap();
            let s_hat = if rep.compact_support { f64::INFINITY } else { rep.s_hat.unwrap() };
            let gap = reg.exponent - s_hat;
            let in_band = gap.abs() < 0.05;
            let fitted = r.fitted_slope.unwrap();
            eprintln!("{m} alpha={alpha}: fitted={fitted:.4} predicted={:?} verdict={:?}", r.predicted_slope, r.verdict);
            assert_ne!(r.verdict, Verdict::Violated, "{m} alpha={alpha}");
            assert_eq!(reg.kind, RegimeKind::Carleson);
            if in_band {
                continue;
            }
            assert_eq!(r.bounded_expected, Some(gap <= 0.0), "{m} alpha={alpha}");
            assert_eq!(r.verdict, Verdict::Consistent, "{m} alpha={alpha}");
            let predicted = r.predicted_slope.unwrap();
            if predicted > 0.0 {
                assert!((fitted - predicted).abs() <= 0.1);
                assert!(r.residual.unwrap() <= 0.1);
            } else {
                assert!(fitted <= 0.1);
            }
        }
    }
}

#[test]
fn compactness_follows_vanishing() {
    let cfg = ProbeConfig::default();
    for m in corpus() {
        let r = compactness_probe(1.0, 1.0, 2.0, &m, &cfg).unwrap();
        eprintln!("{m}: decay={:?} vanishing={:?} verdict={:?}", r.decay_ratio, r.vanishing, r.verdict);
        assert_ne!(r.verdict, Verdict::Violated, "{m}");
    }
}

#[test]
fn essential_sandwich_over_corpus() {
    let cfg = ProbeConfig::default();
    for m in corpus() {
        let r = essential_norm_proxy(1.0, 1.0, 2.0, &m, &cfg).unwrap();
        let (lo, up) = (r.lower.unwrap(), r.upper.unwrap());
        eprintln!("{m}: lower={lo:.4} upper={up:.4} verdict={:?}", r.verdict);
        assert!(lo <= cfg.sandwich_constant * up + cfg.zero_tol, "{m}");
        let vanishing = classify_carleson(&m, 0.0, TailGrid::default(), Some(2.0), 0.1).unwrap().vanishing;
        if vanishing {
            assert!(lo <= cfg.zero_tol, "{m}: lower {lo}");
            assert!(up <= cfg.sandwich_constant * cfg.zero_tol, "{m}: upper {up}");
        }
    }
}
