use fsorf_channel::{best_user_outdated_cdf, fso_snr_cdf, phi_coeffs, RfNetworkSpec};
use fsorf_specfun::{gamma, ln_gamma, residue_leading_terms};

use crate::error::{unit_interval, Result};
use crate::system::SystemSpec;

/// Probability that the gated end-to-end SNR falls below `gamma_th`.
pub fn outage(spec: &SystemSpec) -> Result<f64> {
    let f_r = fso_snr_cdf(&spec.fso, spec.delta_th)?;
    let f_u = best_user_outdated_cdf(&spec.rf, spec.gamma_th)?;
    unit_interval("outage", f_r + (1.0 - f_r) * f_u)
}

/// High-SNR outage: leading pole terms of the optical CDF at `delta_th`
/// plus the small-argument RF CDF at `gamma_th`.
pub fn asymptotic_outage(spec: &SystemSpec) -> Result<f64> {
    Ok(fso_asymptotic_cdf(spec)? + rf_asymptotic_cdf(&spec.rf, spec.gamma_th))
}

fn fso_asymptotic_cdf(spec: &SystemSpec) -> Result<f64> {
    let fso = &spec.fso;
    let x = fso.b_const() * spec.delta_th / fso.mu();
    let terms = residue_leading_terms(&fso.cdf_kernel()?, x)?;
    Ok(fso.a_const() * terms.iter().sum::<f64>())
}

/// Leading power of the selected-user CDF near the origin.
pub fn rf_asymptotic_cdf(rf: &RfNetworkSpec, x: f64) -> f64 {
    let big_l = rf.big_l();
    let lf = big_l as f64;
    let n = rf.n_users();
    let u = rf.m() as f64 * x / rf.gamma_bar_u();
    if rf.rho() == 1.0 {
        return (u.powf(lf) / gamma(lf + 1.0)).powi(n as i32);
    }
    let rho = rf.rho();
    let mut s = 0.0;
    for k in 0..n {
        let kf = k as f64;
        let denom = 1.0 + kf * (1.0 - rho);
        let binom = (0..k).fold(1.0, |acc, i| acc * (n - 1 - i) as f64 / (i + 1) as f64);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (l, phi) in phi_coeffs(k, big_l).iter().enumerate() {
            let lf_l = l as f64;
            let ln_mag = ln_gamma(lf + lf_l) - 2.0 * ln_gamma(lf) - lf.ln() - (lf + lf_l) * denom.ln();
            s += sign * binom * phi * (1.0 - rho).powi(l as i32) * ln_mag.exp();
        }
    }
    n as f64 * s * u.powf(lf)
}

/// High-SNR outage slope magnitude.
pub fn diversity_order(spec: &SystemSpec) -> f64 {
    spec.fso.diversity().min(spec.rf.diversity())
}
