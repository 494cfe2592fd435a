use fsorf_channel::{
    best_user_outdated_cdf, fso_snr_cdf, fso_snr_pdf, Detector, FsoChannelSpec, OutdatedCdf,
    RfNetworkSpec,
};
use fsorf_link::{FsoBudget, RfBudget};
use fsorf_metrics::*;
use fsorf_specfun::{integrate_semi_infinite_with, ln_gamma, QuadOptions};
use proptest::prelude::*;

fn system(xi: f64, det: Detector, m: f64, nt: u32, n: u32, rho: f64) -> SystemSpec {
    SystemSpec::with_default_thresholds(
        FsoChannelSpec::new(2.902, 2.51, xi, det, 1.0).unwrap(),
        RfNetworkSpec::new(m, nt, n, rho, 1.0).unwrap(),
    )
}

fn at(s: &SystemSpec, p: f64) -> SystemSpec {
    s.at_power(&FsoBudget::default(), &RfBudget::default(), p).unwrap()
}

/// `∫ g(γ) f_min(γ) dγ` for the weaker-hop SNR, split at the RF mean.
fn expect_min<G: Fn(f64) -> f64>(s: &SystemSpec, g: G) -> f64 {
    let rf = OutdatedCdf::new(&s.rf);
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let fr = fso_snr_pdf(&s.fso, x).unwrap();
        let cr = fso_snr_cdf(&s.fso, x).unwrap();
        g(x) * (fr * (1.0 - rf.cdf(x).unwrap()) + rf.pdf(x) * (1.0 - cr))
    };
    let knee = s.rf.gamma_bar_u().min(s.fso.mu());
    integrate_semi_infinite_with(f, &QuadOptions::with_tol(1e-13).knee(knee)).unwrap()
}

#[test]
fn aser_matches_sep_average_over_weaker_hop() {
    let cases = [
        ("hqam:16", 6.7, 1.0, 2, 0.8),
        ("rqam:8:4x2:1", 6.7, 1.0, 2, 0.8),
        ("xqam:32", 6.7, 1.0, 2, 0.8),
        ("hqam:4", 1.1, 2.0, 1, 0.2),
    ];
    for (c, xi, m, nt, rho) in cases {
        let c: ConstellationSpec = c.parse().unwrap();
        for p in [0.0, 15.0, 30.0] {
            let s = at(&system(xi, Detector::Heterodyne, m, nt, 2, rho), p);
            let got = aser(&c, &s, SeriesPolicy::default()).unwrap();
            let want = expect_min(&s, |x| conditional_sep(&c, x));
            assert!(((got - want) / want).abs() < 1e-6, "{c} p={p}: {got} vs {want}");
        }
    }
}

#[test]
fn derivative_terms_match_finite_differences() {
    for c in ["hqam:4", "hqam:16", "hqam:256", "rqam:8:4x2:1", "rqam:32:8x4:0.7", "sqam:64", "xqam:32", "xqam:128", "xqam:512"] {
        let c: ConstellationSpec = c.parse().unwrap();
        for i in 0..40 {
            let g = 0.1 * 500f64.powf(i as f64 / 39.0);
            let h = 1e-3 * g;
            let p = |x: f64| conditional_sep(&c, x);
            let fd = (8.0 * (p(g + h) - p(g - h)) - (p(g + 2.0 * h) - p(g - 2.0 * h))) / (12.0 * h);
            let an = conditional_sep_derivative(&c, g);
            assert!(((an - fd) / fd).abs() < 1e-6, "{c} γ={g}: {an} vs {fd}");
        }
    }
}

#[test]
fn ergodic_matches_quadrature() {
    for (det, xi, m, nt) in [(Detector::Heterodyne, 6.7, 1.0, 1), (Detector::ImDd, 1.1, 2.0, 2)] {
        let s = at(&system(xi, det, m, nt, 2, 0.5), 20.0);
        let rho = s.varrho();
        let pass = 1.0 - fso_snr_cdf(&s.fso, s.delta_th).unwrap();
        let rf = OutdatedCdf::new(&s.rf);
        let mean_log = integrate_semi_infinite_with(
            |x| if x > 0.0 { (rho * x).ln_1p() * rf.pdf(x) } else { 0.0 },
            &QuadOptions::with_tol(1e-12).knee(s.rf.gamma_bar_u()),
        )
        .unwrap();
        let want = 0.5 * pass * mean_log / std::f64::consts::LN_2;
        let got = ergodic_capacity(&s).unwrap();
        assert!(((got - want) / want).abs() < 1e-8, "{got} vs {want}");
    }
}

#[test]
fn ergodic_rayleigh_exponential_integral() {
    let mut s = system(6.7, Detector::Heterodyne, 1.0, 1, 1, 1.0);
    s = at(&s, 20.0);
    let g = s.rf.gamma_bar_u();
    let pass = 1.0 - fso_snr_cdf(&s.fso, s.delta_th).unwrap();
    // e^{1/γ̄} E₁(1/γ̄) = ∫₀^∞ e^{-t}/(t + 1/γ̄) dt
    let e1 = integrate_semi_infinite_with(|t| (-t).exp() / (t + 1.0 / g), &QuadOptions::with_tol(1e-13)).unwrap();
    let want = 0.5 * pass * e1 / std::f64::consts::LN_2;
    let got = ergodic_capacity(&s).unwrap();
    assert!(((got - want) / want).abs() < 1e-9);
}

#[test]
fn ergodic_zero_when_gate_closed() {
    let mut s = at(&system(6.7, Detector::Heterodyne, 1.0, 1, 2, 0.5), 0.0);
    s.delta_th = 1e30;
    assert_eq!(ergodic_capacity(&s).unwrap(), 0.0);
}

#[test]
fn effective_capacity_limits() {
    for det in [Detector::Heterodyne, Detector::ImDd] {
        let s = at(&system(6.7, det, 1.0, 2, 2, 0.8), 10.0);
        let erg = ergodic_capacity(&s).unwrap();
        let small = effective_capacity(&s, 1e-4).unwrap();
        assert!(((small.value - erg) / erg).abs() < 0.01);
        let vals: Vec<f64> = [1e-2, 1e-1, 1.0, 10.0, 1e3]
            .iter()
            .map(|&t| effective_capacity(&s, t).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0]), "{vals:?}");
        assert!(vals[4] < 0.02 * vals[0], "{vals:?}");
        let huge = effective_capacity(&s, 1e5).unwrap().value;
        assert!(huge > 0.0 && huge < vals[4]);
    }
}

#[test]
fn effective_capacity_closed_form_agrees() {
    for det in [Detector::Heterodyne, Detector::ImDd] {
        for theta in [0.05, 0.7, 3.3] {
            let s = at(&system(6.7, det, 2.0, 2, 2, 0.8), 10.0);
            let e = effective_capacity(&s, theta).unwrap();
            assert!(e.discrepancy().unwrap() < 1e-6, "{det:?} θ={theta}: {e:?}");
            assert!(e.warning().is_none());
        }
    }
}

#[test]
fn effective_capacity_direct_quadrature() {
    let s = at(&system(1.1, Detector::Heterodyne, 1.0, 1, 3, 0.3), 20.0);
    let theta = 2.0;
    let th = theta / (2.0 * std::f64::consts::LN_2);
    let rf = OutdatedCdf::new(&s.rf);
    let m = integrate_semi_infinite_with(
        |x| if x > 0.0 { (1.0 + x).powf(-th) * rf.pdf(x) } else { 0.0 },
        &QuadOptions::with_tol(1e-13).knee(s.rf.gamma_bar_u()),
    )
    .unwrap();
    let pass = 1.0 - fso_snr_cdf(&s.fso, s.delta_th).unwrap();
    let want = -pass * m.ln() / theta;
    let got = effective_capacity(&s, theta).unwrap().value;
    assert!(((got - want) / want).abs() < 1e-8);
}

#[test]
fn asymptotic_outage_converges() {
    let cases = [
        system(1.1, Detector::ImDd, 1.0, 1, 2, 0.8),
        system(6.7, Detector::Heterodyne, 1.0, 1, 2, 0.8),
        system(6.7, Detector::Heterodyne, 1.0, 1, 2, 1.0),
        system(6.7, Detector::Heterodyne, 2.0, 2, 2, 0.2),
    ];
    for s in &cases {
        let hi = at(s, 80.0);
        let r = asymptotic_outage(&hi).unwrap() / outage(&hi).unwrap();
        assert!((r - 1.0).abs() < 0.1, "{s:?}: {r}");
    }
}

#[test]
fn outage_formula_and_edges() {
    let s = at(&system(6.7, Detector::Heterodyne, 1.0, 1, 2, 0.8), 10.0);
    let f_r = fso_snr_cdf(&s.fso, s.delta_th).unwrap();
    let f_u = best_user_outdated_cdf(&s.rf, s.gamma_th).unwrap();
    assert!((outage(&s).unwrap() - (f_r + (1.0 - f_r) * f_u)).abs() < 1e-15);
    let mut open = s.clone();
    open.delta_th = 1e-300;
    assert!((outage(&open).unwrap() - f_u).abs() < 1e-12);
}

#[test]
fn aser_low_power_tends_to_zero_snr_sep() {
    let c = ConstellationSpec::hqam(16).unwrap();
    let s = at(&system(6.7, Detector::Heterodyne, 1.0, 2, 2, 0.8), -60.0);
    let v = aser(&c, &s, SeriesPolicy::default()).unwrap();
    assert!((v - conditional_sep(&c, 0.0)).abs() < 1e-3, "{v}");
}

#[test]
fn aser_rejects_imdd_without_flag() {
    let c = ConstellationSpec::hqam(16).unwrap();
    let s = at(&system(6.7, Detector::ImDd, 1.0, 2, 2, 0.8), 20.0);
    assert!(matches!(aser(&c, &s, SeriesPolicy::default()), Err(MetricsError::ImDdAser)));
    let policy = SeriesPolicy { expert_im_dd: true, ..Default::default() };
    let got = aser(&c, &s, policy).unwrap();
    let want = expect_min(&s, |x| conditional_sep(&c, x));
    assert!(((got - want) / want).abs() < 1e-6, "{got} vs {want}");
}

#[test]
fn gamma_mixture_kernel_against_direct_integral() {
    let (c1, c2, sigma, psi) = (3.0, 0.7, 0.5, 0.4);
    let q = integrate_semi_infinite_with(
        |x| {
            if x <= 0.0 {
                return 0.0;
            }
            let p = fsorf_specfun::reg_gamma_lower(c1, c2 * x).unwrap();
            x.powf(sigma - 1.0) * (-psi * x).exp() * p
        },
        &QuadOptions::with_tol(1e-13),
    )
    .unwrap();
    let f = fsorf_specfun::gauss_2f1(1.0, c1 + sigma, c1 + 1.0, c2 / (c2 + psi)).unwrap();
    let g = (c1 * c2.ln() + ln_gamma(c1 + sigma) - ln_gamma(c1) - c1.ln() - (c1 + sigma) * (c2 + psi).ln()).exp() * f;
    assert!(((g - q) / q).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn outage_monotone(p in -10.0f64..40.0, dp in 0.5f64..10.0, rho in 0.0f64..=1.0, xi_hi in any::<bool>(), imdd in any::<bool>()) {
        let det = if imdd { Detector::ImDd } else { Detector::Heterodyne };
        let s = system(if xi_hi { 6.7 } else { 1.1 }, det, 1.0, 2, 2, rho);
        let lo = outage(&at(&s, p)).unwrap();
        let hi = outage(&at(&s, p + dp)).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi <= lo + 1e-12);
        let mut t = at(&s, p);
        t.gamma_th *= 2.0;
        prop_assert!(outage(&t).unwrap() >= lo - 1e-12);
        t.delta_th *= 2.0;
        prop_assert!(outage(&t).unwrap() >= lo - 1e-12);
    }

    #[test]
    fn sep_bounded_and_decreasing(g in 0.0f64..200.0, which in 0usize..5) {
        let c: ConstellationSpec = ["hqam:16", "hqam:64", "rqam:8:4x2:1", "xqam:32", "sqam:16"][which].parse().unwrap();
        let a = conditional_sep(&c, g);
        let b = conditional_sep(&c, g * 1.05 + 1e-3);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a);
    }
}

#[test]
fn truncation_doubling_is_stable() {
    for c in ["hqam:16", "rqam:8:4x2:1", "xqam:32"] {
        let c: ConstellationSpec = c.parse().unwrap();
        for p in [5.0, 25.0, 40.0] {
            let s = at(&system(6.7, Detector::Heterodyne, 1.0, 2, 2, 0.8), p);
            let a = aser(&c, &s, SeriesPolicy::with_terms(80)).unwrap();
            let b = aser(&c, &s, SeriesPolicy::with_terms(160)).unwrap();
            assert!(((a - b) / b).abs() < 1e-6, "{c} p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn slow_series_extend_until_converged() {
    let c = ConstellationSpec::xqam(512).unwrap();
    let s = at(&system(6.7, Detector::Heterodyne, 1.0, 2, 2, 0.8), 30.0);
    assert!(matches!(
        aser(&c, &s, SeriesPolicy::default()),
        Err(MetricsError::SeriesTruncation { .. })
    ));
    let e = aser_converged(&c, &s, SeriesPolicy::default(), 4096).unwrap();
    assert!(e.terms > 80 && e.tail_ratio <= TRUNCATION_TOL);
    let want = expect_min(&s, |x| conditional_sep(&c, x));
    assert!(((e.value - want) / want).abs() < 2.0 * TRUNCATION_TOL);
}

#[test]
fn tail_estimate_tracks_actual_truncation_error() {
    let c = ConstellationSpec::hqam(16).unwrap();
    let s = at(&system(6.7, Detector::Heterodyne, 1.0, 2, 2, 0.8), 35.0);
    let short = aser_detailed(&c, &s, SeriesPolicy::with_terms(80)).unwrap();
    let long = aser_detailed(&c, &s, SeriesPolicy::with_terms(400)).unwrap();
    let actual = (long.value - short.value).abs() / long.value;
    assert!(actual > 0.0 && (short.tail_ratio / actual - 1.0).abs() < 0.1);
}
