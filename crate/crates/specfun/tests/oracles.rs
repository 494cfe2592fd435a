//! Special functions checked against independent series and quadrature.

use approx::assert_relative_eq;
use fsorf_specfun::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn bessel_k(nu: f64, z: f64) -> f64 {
    // K_ν(z) = ∫_0^∞ exp(-z cosh t) cosh(νt) dt
    integrate_semi_infinite(
        |t: f64| 0.5 * ((-z * t.cosh() + nu * t).exp() + (-z * t.cosh() - nu * t).exp()),
        1e-14,
    )
    .unwrap()
}

fn bessel_spec(nu: f64) -> MeijerGSpec {
    MeijerGSpec::new(2, 0, vec![], vec![0.5 * nu, -0.5 * nu]).unwrap()
}

#[test]
fn reg_gamma_lower_vs_quadrature() {
    let q = integrate(|t: f64| t.powf(1.5) * (-t).exp(), 0.0, 3.0, &QuadOptions::with_tol(1e-14))
        .unwrap();
    let expect = q / gamma(2.5);
    assert_relative_eq!(reg_gamma_lower(2.5, 3.0).unwrap(), expect, max_relative = 1e-12);
}

#[test]
fn gauss_2f1_vs_plain_series() {
    let (a, b, c, z) = (1.0, 3.5, 4.5, 0.3);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..200 {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    assert_relative_eq!(gauss_2f1(a, b, c, z).unwrap(), sum, max_relative = 1e-13);
}

#[test]
fn kummer_vs_series_and_error_function() {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..200 {
        let k = k as f64;
        term *= (1.0 + k) / ((1.5 + k) * (k + 1.0));
        sum += term;
    }
    let v = kummer_1f1(1.0, 1.5, 1.0).unwrap();
    assert_relative_eq!(v, sum, max_relative = 1e-13);
    let erf1 = 1.0 - erfc(1.0);
    assert_relative_eq!(v, 1f64.exp() * PI.sqrt() / 2.0 * erf1, max_relative = 1e-13);
}

#[test]
fn gaussian_q_vs_maclaurin_erf() {
    // erf(x) = 2/√π Σ (-1)^n x^{2n+1} / (n! (2n+1))
    let x = 1.0 / 2f64.sqrt();
    let mut sum = 0.0;
    let mut pw = x;
    let mut fact = 1.0;
    for n in 0..40 {
        if n > 0 {
            fact *= n as f64;
            pw *= -x * x;
        }
        sum += pw / (fact * (2 * n + 1) as f64);
    }
    let q = 0.5 * (1.0 - 2.0 / PI.sqrt() * sum);
    assert_relative_eq!(gaussian_q(1.0), q, max_relative = 1e-14);
    assert!((gaussian_q(1.0) - 0.158_655).abs() < 1e-6);
}

#[test]
fn meijer_bessel_reduction_grid() {
    let nu = 0.392;
    let spec = bessel_spec(nu);
    for i in 0..=24 {
        let x = 1e-3 * (2e4f64).powf(i as f64 / 24.0);
        let g = meijer_g(&spec, x).unwrap();
        let k = 2.0 * bessel_k(nu, 2.0 * x.sqrt());
        assert!((g - k).abs() <= 1e-9 * k.max(1.0), "x={x} g={g} k={k}");
    }
}

#[test]
fn meijer_coalescing_poles_use_the_line_integral() {
    // ν = 1 puts the two poles one unit apart.
    let spec = bessel_spec(1.0);
    assert!(spec.has_coalescing_poles());
    for &x in &[1e-3, 0.2, 1.0, 5.0, 20.0] {
        let g = meijer_g(&spec, x).unwrap();
        let k = 2.0 * bessel_k(1.0, 2.0 * x.sqrt());
        assert!((g - k).abs() <= 1e-9 * k.max(1.0), "x={x}");
    }
}

#[test]
fn perturbed_coalescing_values_are_consistent() {
    for &x in &[0.01, 0.5, 3.0] {
        let exact = meijer_g(&bessel_spec(1.0), x).unwrap();
        let e1 = meijer_g(&bessel_spec(1.0 + 2e-6), x).unwrap();
        let e2 = meijer_g(&bessel_spec(1.0 + 1e-6), x).unwrap();
        assert!(((e1 - e2) / e2).abs() < 1e-5);
        assert!(((e2 - exact) / exact).abs() < 1e-5);
    }
}

#[test]
fn semi_infinite_normalizations() {
    assert_relative_eq!(integrate_semi_infinite(|x| (-x).exp(), 1e-10).unwrap(), 1.0, max_relative = 1e-10);
    assert_relative_eq!(
        integrate_semi_infinite(|x| x * (-x).exp(), 1e-10).unwrap(),
        1.0,
        max_relative = 1e-10
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reg_gamma_lower_bounded_and_monotone(a in 0.1f64..20.0, x in 0.0f64..60.0, dx in 0.0f64..5.0) {
        let p1 = reg_gamma_lower(a, x).unwrap();
        let p2 = reg_gamma_lower(a, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&p1));
        prop_assert!(p2 >= p1 - 1e-15);
    }

    #[test]
    fn meijer_exponential(x in 1e-3f64..20.0) {
        let spec = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        let g = meijer_g(&spec, x).unwrap();
        prop_assert!((g - (-x).exp()).abs() <= 1e-9 * (-x).exp().max(1e-300) + 1e-15);
    }

    #[test]
    fn meijer_evaluators_agree(x in 1e-2f64..5.0, nu in 0.05f64..0.95) {
        let spec = bessel_spec(nu);
        let r = meijer_g_residues(&spec, x).unwrap().value();
        let c = meijer_g_contour(&spec, x).unwrap().value();
        prop_assert!(((r - c) / c).abs() < 1e-10);
    }

    #[test]
    fn kummer_negative_argument_transform(z in -30.0f64..0.0) {
        // ₁F₁(1; 3/2; -z) has the Dawson-like closed form via the series on both sides;
        // compare the transformed value with the raw alternating sum where it is stable.
        prop_assume!(z > -4.0);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..200 {
            let k = k as f64;
            term *= (1.0 + k) / ((1.5 + k) * (k + 1.0)) * z;
            sum += term;
        }
        let v = kummer_1f1(1.0, 1.5, z).unwrap();
        prop_assert!(((v - sum) / sum).abs() < 1e-11);
    }
}
