//! Helpers shared by the acceptance checks: reference systems, level
//! crossings and slope fits.

use fsorf_channel::{Detector, FsoChannelSpec, RfNetworkSpec};
use fsorf_link::{FsoBudget, RfBudget};
use fsorf_metrics::SystemSpec;

pub const ALPHA: f64 = 2.902;
pub const BETA: f64 = 2.51;

/// Relay with unit average SNRs and 5 dB thresholds; scale with [`at_power`]
/// or [`at_snr`].
pub fn system(xi: f64, detector: Detector, m: f64, n_t: u32, n_users: u32, rho: f64) -> SystemSpec {
    SystemSpec::with_default_thresholds(
        FsoChannelSpec::new(ALPHA, BETA, xi, detector, 1.0).expect("valid optical hop"),
        RfNetworkSpec::new(m, n_t, n_users, rho, 1.0).expect("valid RF hop"),
    )
}

/// Both transmitters at `ptx_dbm` through the default link budgets.
pub fn at_power(s: &SystemSpec, ptx_dbm: f64) -> SystemSpec {
    s.at_power(&FsoBudget::default(), &RfBudget::default(), ptx_dbm)
        .expect("default budgets are valid")
}

/// Sets the optical average electrical SNR `μ` and the RF average SNR to `snr`.
pub fn at_snr(s: &SystemSpec, snr: f64) -> SystemSpec {
    let unit_mu = s.fso.with_gamma_bar_r(1.0).expect("positive").mu();
    SystemSpec {
        fso: s.fso.with_gamma_bar_r(snr / unit_mu).expect("positive"),
        rf: s.rf.with_gamma_bar_u(snr).expect("positive"),
        ..s.clone()
    }
}

/// Power in `[lo, hi]` dBm where a decreasing positive curve crosses `level`,
/// by bisection on the log of the curve. `None` when the bracket misses it.
pub fn crossing<F>(f: F, level: f64, lo: f64, hi: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let g = |p: f64| f(p).ln() - level.ln();
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (g(a), g(b));
    if !(ga > 0.0 && gb < 0.0) {
        return None;
    }
    while b - a > 1e-9 {
        let mid = 0.5 * (a + b);
        if g(mid) > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Least-squares slope of `ys` against `xs`.
pub fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// `n` points from `a` to `b` inclusive, evenly spaced in log.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
