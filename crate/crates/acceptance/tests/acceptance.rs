use std::time::{Duration, Instant};

use fsorf_acceptance::{at_power, at_snr, crossing, log_space, slope, system, ALPHA, BETA};
use fsorf_channel::{best_user_outdated_cdf, fso_snr_cdf, fso_snr_pdf, phi_coeffs, Detector, FsoChannelSpec, RfNetworkSpec};
use fsorf_metrics::{
    aser_converged, aser_detailed, conditional_sep, conditional_sep_derivative, diversity_order, effective_capacity,
    ergodic_capacity, outage, ConstellationSpec, SeriesPolicy, SystemSpec,
};
use fsorf_montecarlo::{simulate_aser, simulate_capacity, simulate_outage, CapacityKind, EffectiveMode, SimConfig};
use fsorf_specfun::{gamma, integrate, QuadOptions};

const MC_SAMPLES: u64 = 1_000_000;
const SEED: u64 = 20_240_601;
const MAX_TERMS: u32 = 1 << 14;

struct Report {
    pass: bool,
    lines: Vec<String>,
}

impl Report {
    fn new() -> Self {
        Report {
            pass: true,
            lines: Vec::new(),
        }
    }

    /// Records a check; failing checks are marked in the detail output.
    fn check(&mut self, ok: bool, msg: String) {
        self.pass &= ok;
        self.lines.push(format!("{} {msg}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, msg: String) {
        self.lines.push(format!("     {msg}"));
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn(&mut Report),
}

fn mc(s: &SystemSpec) -> SimConfig {
    SimConfig::new(s.clone(), MC_SAMPLES, SEED)
}

fn sweep_dbm() -> Vec<f64> {
    (0..=25).map(|k| -10.0 + 2.0 * k as f64).collect()
}

fn cdf_master_oracle(r: &mut Report) {
    for det in [Detector::Heterodyne, Detector::ImDd] {
        for xi in [1.1, 6.7] {
            let s = FsoChannelSpec::new(ALPHA, BETA, xi, det, 10.0).unwrap();
            let mu = s.mu();
            let pdf = |t: f64| fso_snr_pdf(&s, t).unwrap();
            let opts = QuadOptions::with_tol(1e-12);
            let mut worst: f64 = 0.0;
            for x in log_space(1e-3 * mu, 1e3 * mu, 25) {
                // geometric pieces from far below the support's bulk up to x
                let mut lo = 1e-24 * mu;
                let mut q = 0.0;
                while lo < x {
                    let hi = (lo * 10.0).min(x);
                    q += integrate(pdf, lo, hi, &opts).unwrap();
                    lo = hi;
                }
                let c = fso_snr_cdf(&s, x).unwrap();
                worst = worst.max((c - q).abs());
            }
            r.check(
                worst <= 1e-8,
                format!("i={} xi={xi}: max |CDF - quadrature| = {worst:.2e} (limit 1e-8)", det.exponent()),
            );
        }
    }
}

fn recursion_exactness(r: &mut Report) {
    let mut worst: f64 = 0.0;
    for big_l in 1..=6u32 {
        let inv_fact: Vec<f64> = (0..big_l).map(|q| 1.0 / gamma(q as f64 + 1.0)).collect();
        for k in 0..=5u32 {
            // every k-tuple of exponents, each below L
            let mut want = vec![0.0; (k * (big_l - 1) + 1) as usize];
            let total = (big_l as usize).pow(k);
            for idx in 0..total {
                let (mut rest, mut deg, mut coef) = (idx, 0usize, 1.0);
                for _ in 0..k {
                    let q = rest % big_l as usize;
                    rest /= big_l as usize;
                    deg += q;
                    coef *= inv_fact[q];
                }
                want[deg] += coef;
            }
            let got = phi_coeffs(k, big_l);
            if got.len() != want.len() {
                r.check(false, format!("k={k} L={big_l}: {} coefficients, expected {}", got.len(), want.len()));
                continue;
            }
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((g - w).abs());
            }
        }
    }
    r.check(worst <= 1e-12, format!("max coefficient error {worst:.2e} over k<=5, mNt<=6 (limit 1e-12)"));
}

fn degeneracy(r: &mut Report) {
    let gbar = 5.0;
    let mut worst: f64 = 0.0;
    for m in [1.0, 2.0] {
        for nt in [1u32, 2] {
            for n in [1u32, 2] {
                let s = RfNetworkSpec::new(m, nt, n, 1.0, gbar).unwrap();
                let shape = (m as u32) * nt;
                for x in log_space(1e-2 * gbar, 1e2 * gbar, 50) {
                    let u = m * x / gbar;
                    let mut partial = 0.0;
                    let mut term = 1.0;
                    for k in 0..shape {
                        if k > 0 {
                            term *= u / k as f64;
                        }
                        partial += term;
                    }
                    let single = 1.0 - (-u).exp() * partial;
                    let want = single.powi(n as i32);
                    let got = best_user_outdated_cdf(&s, x).unwrap();
                    worst = worst.max((got - want).abs());
                }
            }
        }
    }
    r.check(worst <= 1e-10, format!("rho=1 vs order statistic: max error {worst:.2e} (limit 1e-10)"));
}

const MNT: [(f64, u32); 4] = [(1.0, 1), (2.0, 1), (1.0, 2), (2.0, 2)];

fn outage_mc(r: &mut Report) {
    let grid = sweep_dbm();
    for rho in [0.2, 0.8] {
        for (m, nt) in MNT {
            let base = system(6.7, Detector::Heterodyne, m, nt, 2, rho);
            let (mut checked, mut worst_z, mut bad) = (0, 0.0f64, Vec::new());
            for &p in &grid {
                let s = at_power(&base, p);
                let a = outage(&s).unwrap();
                if a < 1e-4 {
                    continue;
                }
                let e = simulate_outage(&mc(&s));
                let tol = (3.0 * e.std_error).max(0.05 * a);
                checked += 1;
                worst_z = worst_z.max((e.value - a).abs() / tol);
                if (e.value - a).abs() > tol {
                    bad.push(format!("{p} dBm: {a:.4e} vs {:.4e}", e.value));
                }
            }
            r.check(
                bad.is_empty(),
                format!(
                    "rho={rho} m={m} Nt={nt}: {checked} points, worst |diff|/tol = {worst_z:.2} {}",
                    bad.join("; ")
                ),
            );
        }
    }
    for (m, nt) in MNT {
        let out = |rho: f64| {
            let base = system(6.7, Detector::Heterodyne, m, nt, 2, rho);
            crossing(|p| outage(&at_power(&base, p)).unwrap(), 1e-4, -10.0, 100.0)
        };
        let target = if (m, nt) == (2.0, 2) { 2.6 } else { 3.7 };
        match (out(0.2), out(0.8)) {
            (Some(lo), Some(hi)) => {
                let gain = lo - hi;
                r.check(
                    (gain - target).abs() <= 0.5,
                    format!(
                        "m={m} Nt={nt}: 1e-4 outage at {lo:.2} / {hi:.2} dBm, rho gain {gain:.3} dB (target {target} +- 0.5)"
                    ),
                );
            }
            other => r.check(false, format!("m={m} Nt={nt}: no 1e-4 crossing found {other:?}")),
        }
    }
}

fn diversity_slope(r: &mut Report) {
    let cases = [
        ("i=2 xi=1.1", system(1.1, Detector::ImDd, 1.0, 1, 2, 0.8), 0.605),
        ("i=1 xi=6.7 rho=0.8", system(6.7, Detector::Heterodyne, 1.0, 1, 2, 0.8), 1.0),
        ("i=1 xi=6.7 rho=1 N=2", system(6.7, Detector::Heterodyne, 1.0, 1, 2, 1.0), 2.0),
    ];
    for (name, base, stated) in cases {
        let d = diversity_order(&base);
        let snr = log_space(1e10, 1e12, 5);
        let xs: Vec<f64> = snr.iter().map(|g| g.log10()).collect();
        let ys: Vec<f64> = snr.iter().map(|&g| outage(&at_snr(&base, g)).unwrap().log10()).collect();
        let fitted = -slope(&xs, &ys);
        r.check(
            (d - stated).abs() < 1e-3 && ((fitted - d) / d).abs() <= 0.05,
            format!("{name}: fitted slope {fitted:.4}, diversity order {d:.4} (stated {stated}, within 5%)"),
        );
    }
}

fn ergodic(r: &mut Report) {
    let mut value = |rho: f64, m: f64, nt: u32| {
        let s = at_power(&system(6.7, Detector::Heterodyne, m, nt, 2, rho), 20.0);
        let a = ergodic_capacity(&s).unwrap();
        let e = simulate_capacity(&mc(&s), CapacityKind::Ergodic);
        let rel = (e.value - a).abs() / a;
        r.check(
            rel <= 0.01,
            format!("rho={rho} m={m} Nt={nt}: analytic {a:.5} MC {:.5} +- {:.1e}, rel diff {rel:.2e} (limit 1%)", e.value, e.std_error),
        );
        a
    };
    let mut c = Vec::new();
    for rho in [0.2, 0.8] {
        for (m, nt) in MNT {
            c.push(value(rho, m, nt));
        }
    }
    let (base, m_gain, nt_gain, rho_gain) = (c[0], c[1] - c[0], c[2] - c[0], c[4] - c[0]);
    r.check(nt_gain > m_gain, format!("Nt gain {nt_gain:.4} exceeds m gain {m_gain:.4} (base {base:.4} bits/s/Hz)"));
    r.check((m_gain - 0.18).abs() <= 0.05, format!("m 1->2 gain {m_gain:.4} (reference 0.18 +- 0.05)"));
    r.check((nt_gain - 0.67).abs() <= 0.05, format!("Nt 1->2 gain {nt_gain:.4} (reference 0.67 +- 0.05)"));
    r.note(format!("rho 0.2->0.8 gain {rho_gain:.4}"));
}

fn effective(r: &mut Report) {
    let thetas = [1e-2, 1e-1, 1.0, 10.0, 1e3];
    for det in [Detector::Heterodyne, Detector::ImDd] {
        for (m, nt) in MNT {
            let tag = format!("i={} m={m} Nt={nt}", det.exponent());
            let s = at_power(&system(6.7, det, m, nt, 2, 0.8), 10.0);
            let erg = ergodic_capacity(&s).unwrap();
            let small = effective_capacity(&s, 1e-4).unwrap().value;
            let rel = (small - erg).abs() / erg;
            r.check(rel <= 0.01, format!("{tag}: theta=1e-4 {small:.5e} vs ergodic {erg:.5e}, rel {rel:.2e}"));

            let vals: Vec<f64> = thetas.iter().map(|&t| effective_capacity(&s, t).unwrap().value).collect();
            let monotone = vals.windows(2).all(|w| w[1] <= w[0]);
            let ratio = vals[4] / vals[0];
            r.check(
                monotone && ratio < 0.01,
                format!(
                    "{tag}: values {} nonincreasing={monotone}, last/first {ratio:.4} (limit 0.01)",
                    vals.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>().join(" ")
                ),
            );

            let cfg = SimConfig {
                effective_mode: EffectiveMode::Paper,
                ..mc(&s)
            };
            let mut worst: f64 = 0.0;
            let mut bad = Vec::new();
            for (&t, &a) in thetas.iter().zip(&vals) {
                let e = simulate_capacity(&cfg, CapacityKind::Effective(t));
                let z = (e.value - a).abs() / e.std_error;
                worst = worst.max(z);
                if !(z <= 3.0) {
                    bad.push(format!("theta={t}: {a:.4e} vs {:.4e} +- {:.1e}", e.value, e.std_error));
                }
            }
            r.check(bad.is_empty(), format!("{tag}: paper-mode MC worst |diff|/SE = {worst:.2} {}", bad.join("; ")));
        }
    }
}

fn aser_mc(r: &mut Report) {
    let base = system(6.7, Detector::Heterodyne, 1.0, 2, 2, 0.8);
    for name in ["hqam:16", "rqam:8:4x2", "xqam:32"] {
        let c: ConstellationSpec = name.parse().unwrap();
        let (mut worst, mut worst_doubling) = (0.0f64, 0.0f64);
        let mut bad = Vec::new();
        for p in sweep_dbm() {
            let s = at_power(&base, p);
            let a80 = match aser_detailed(&c, &s, SeriesPolicy::with_terms(80)) {
                Ok(e) => e.value,
                Err(e) => {
                    bad.push(format!("{p} dBm: {e}"));
                    continue;
                }
            };
            let a160 = aser_detailed(&c, &s, SeriesPolicy::with_terms(160)).unwrap().value;
            worst_doubling = worst_doubling.max(((a160 - a80) / a80).abs());
            let e = simulate_aser(&mc(&s), &c);
            let tol = (3.0 * e.std_error).max(0.05 * a80);
            worst = worst.max((e.value - a80).abs() / tol);
            if (e.value - a80).abs() > tol {
                bad.push(format!("{p} dBm: {a80:.4e} vs {:.4e}", e.value));
            }
        }
        r.check(bad.is_empty(), format!("{c}: 80-term analytic vs MC, worst |diff|/tol = {worst:.2} {}", bad.join("; ")));
        r.check(worst_doubling < 1e-6, format!("{c}: 80 -> 160 terms changes ASER by {worst_doubling:.2e} (limit 1e-6)"));
    }
}

fn power_at_aser(base: &SystemSpec, c: &ConstellationSpec) -> Option<f64> {
    crossing(
        |p| aser_converged(c, &at_power(base, p), SeriesPolicy::default(), MAX_TERMS).unwrap().value,
        1e-3,
        -10.0,
        60.0,
    )
}

fn constellation_ordering(r: &mut Report) {
    let base = system(6.7, Detector::Heterodyne, 1.0, 2, 2, 0.8);
    let need = |s: &str| power_at_aser(&base, &s.parse().unwrap());
    for (m, target) in [(4u32, -0.14), (16, 0.3), (64, 0.5), (256, 0.65)] {
        let tol = if m == 4 { 0.1 } else { 0.15 };
        match (need(&format!("hqam:{m}")), need(&format!("sqam:{m}"))) {
            (Some(h), Some(q)) => {
                let gain = q - h;
                r.check(
                    (gain - target).abs() <= tol,
                    format!("M={m}: HQAM {h:.3} dBm, SQAM {q:.3} dBm, HQAM gain {gain:.3} dB (target {target} +- {tol})"),
                );
            }
            other => r.check(false, format!("M={m}: no 1e-3 crossing {other:?}")),
        }
    }
    for m in [32u32, 128, 512] {
        match (need(&format!("xqam:{m}")), need(&format!("rqam:{m}"))) {
            (Some(x), Some(q)) => r.check(x < q, format!("M={m}: XQAM {x:.3} dBm, RQAM {q:.3} dBm")),
            other => r.check(false, format!("M={m}: no 1e-3 crossing {other:?}")),
        }
    }
}

fn derivative_layer(r: &mut Report) {
    for name in [
        "hqam:4", "hqam:16", "hqam:64", "hqam:256", "hqam:1024", "rqam:8:4x2", "rqam:32:8x4", "sqam:16", "sqam:64",
        "xqam:32", "xqam:128", "xqam:512",
    ] {
        let c: ConstellationSpec = name.parse().unwrap();
        let p = |x: f64| conditional_sep(&c, x);
        let mut worst: f64 = 0.0;
        for g in log_space(0.1, 50.0, 40) {
            let h = 1e-3 * g;
            let fd = (8.0 * (p(g + h) - p(g - h)) - (p(g + 2.0 * h) - p(g - 2.0 * h))) / (12.0 * h);
            let an = conditional_sep_derivative(&c, g);
            worst = worst.max(((an - fd) / fd).abs());
        }
        r.check(worst <= 1e-6, format!("{c}: max relative error {worst:.2e} (limit 1e-6)"));
    }
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "optical CDF against PDF quadrature", budget: Duration::from_secs(30), run: cdf_master_oracle },
        Criterion { id: 2, name: "multinomial coefficient recursion", budget: Duration::from_secs(1), run: recursion_exactness },
        Criterion { id: 3, name: "perfect-CSI degeneracy", budget: Duration::from_secs(5), run: degeneracy },
        Criterion { id: 4, name: "outage analytic vs Monte Carlo", budget: Duration::from_secs(300), run: outage_mc },
        Criterion { id: 5, name: "diversity slope", budget: Duration::from_secs(120), run: diversity_slope },
        Criterion { id: 6, name: "ergodic capacity", budget: Duration::from_secs(180), run: ergodic },
        Criterion { id: 7, name: "effective capacity", budget: Duration::from_secs(120), run: effective },
        Criterion { id: 8, name: "ASER analytic vs Monte Carlo", budget: Duration::from_secs(300), run: aser_mc },
        Criterion { id: 9, name: "constellation ordering", budget: Duration::from_secs(300), run: constellation_ordering },
        Criterion { id: 10, name: "SEP derivative layer", budget: Duration::from_secs(10), run: derivative_layer },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let mut report = Report::new();
        let start = Instant::now();
        (c.run)(&mut report);
        let took = start.elapsed();
        let in_time = took <= c.budget;
        let pass = report.pass && in_time;
        println!(
            "{} criterion {:>2} {} ({:.1} s, budget {} s)",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64(),
            c.budget.as_secs()
        );
        for l in &report.lines {
            println!("       {l}");
        }
        if !in_time {
            println!("       FAIL runtime over budget");
        }
        if !pass {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
