use std::f64::consts::LN_2;

use fsorf_channel::{fso_snr_cdf, OutdatedTerm};
use fsorf_specfun::{
    gamma, integrate_semi_infinite_with, ln_gamma, meijer_g, reg_gamma_upper, MeijerGSpec,
    QuadOptions,
};

use crate::error::{MetricsError, Result};
use crate::system::SystemSpec;

/// Relative gap between quadrature and closed form above which a warning is
/// attached.
pub const CLOSED_FORM_WARN: f64 = 1e-3;

/// Ergodic capacity (bits/s/Hz) with the half-duplex factor ½.
pub fn ergodic_capacity(spec: &SystemSpec) -> Result<f64> {
    let pass = 1.0 - fso_snr_cdf(&spec.fso, spec.delta_th)?;
    if pass == 0.0 {
        return Ok(0.0);
    }
    let rho = spec.varrho();
    let mut sum = 0.0;
    for t in spec.rf.outdated_terms() {
        let kernel = MeijerGSpec::new(1, 3, vec![1.0 - t.c1, 1.0, 1.0], vec![1.0, 0.0])?;
        sum += t.weight * meijer_g(&kernel, rho / t.c2)? / gamma(t.c1);
    }
    Ok((0.5 * pass * sum / LN_2).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCapacity {
    /// Quadrature value.
    pub value: f64,
    /// Term-wise incomplete-gamma closed form, when every term has one.
    pub closed_form: Option<f64>,
}

impl EffectiveCapacity {
    pub fn discrepancy(&self) -> Option<f64> {
        self.closed_form
            .map(|c| ((c - self.value) / self.value.abs().max(f64::MIN_POSITIVE)).abs())
    }

    pub fn warning(&self) -> Option<String> {
        match self.discrepancy() {
            Some(d) if d > CLOSED_FORM_WARN => Some(format!(
                "effective capacity closed form differs from quadrature by {d:.3e} (relative)"
            )),
            _ => None,
        }
    }
}

/// Effective capacity under delay exponent `theta`.
///
/// Evaluates `-(1/θ) P[φ=1] ln E[(1+ϱγ̂)^{-θ/(2 ln 2)}]` by quadrature of each
/// Gamma mixture term. The incomplete-gamma closed form is computed alongside.
pub fn effective_capacity(spec: &SystemSpec, theta: f64) -> Result<EffectiveCapacity> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(MetricsError::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "delay exponent must be positive",
        });
    }
    let pass = 1.0 - fso_snr_cdf(&spec.fso, spec.delta_th)?;
    let theta_hat = theta / (2.0 * LN_2);
    let rho = spec.varrho();
    let terms = spec.rf.outdated_terms();

    // 1 - E[(1+ϱγ)^{-Θ̂}], kept separate so small θ does not cancel
    let mut deficit = 0.0;
    for t in &terms {
        deficit += t.weight * term_deficit(t, rho, theta_hat)?;
    }
    let ln_moment = if deficit < 0.5 {
        (-deficit).ln_1p()
    } else {
        let mut m = 0.0;
        for t in &terms {
            m += t.weight * term_moment(t, rho, theta_hat)?;
        }
        m.ln()
    };
    let value = (-pass * ln_moment / theta).max(0.0);

    let closed_form = terms
        .iter()
        .map(|t| term_moment_closed(t, rho, theta_hat).map(|v| t.weight * v))
        .sum::<Option<f64>>()
        .map(|m| -pass * m.ln() / theta);

    Ok(EffectiveCapacity { value, closed_form })
}

fn term_deficit(t: &OutdatedTerm, rho: f64, theta_hat: f64) -> Result<f64> {
    let (c1, c2) = (t.c1, t.c2);
    let ln_norm = ln_gamma(c1);
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let g = -(-theta_hat * (rho * u / c2).ln_1p()).exp_m1();
        g * ((c1 - 1.0) * u.ln() - u - ln_norm).exp()
    };
    let opts = QuadOptions::relative(1e-12).knee(c1);
    Ok(integrate_semi_infinite_with(f, &opts)?)
}

/// `E[(1+ϱγ)^{-Θ̂}]` by quadrature, for large `Θ̂` where the deficit is
/// close to 1.
fn term_moment(t: &OutdatedTerm, rho: f64, theta_hat: f64) -> Result<f64> {
    let (c1, c2) = (t.c1, t.c2);
    let ln_norm = ln_gamma(c1);
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        (-theta_hat * (rho * u / c2).ln_1p() + (c1 - 1.0) * u.ln() - u - ln_norm).exp()
    };
    // the mass sits near the peak of u^{c1-1} e^{-Θ̂ϱu/c2}
    let knee = c1.min(c1 * c2 / (rho * theta_hat));
    Ok(integrate_semi_infinite_with(f, &QuadOptions::relative(1e-12).knee(knee))?)
}

/// `E[(1+ϱγ)^{-Θ̂}]` for `γ ~ Gamma(c1, rate c2)` via the binomial expansion
/// of `(t-1)^{c1-1}` and upper incomplete gammas.
fn term_moment_closed(t: &OutdatedTerm, rho: f64, theta_hat: f64) -> Option<f64> {
    let n = t.c1 as u32 - 1;
    let b = t.c2 / rho;
    let mut s = 0.0;
    for z in 0..=n {
        let a = z as f64 - theta_hat + 1.0;
        let binom = (0..z).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
        let sign = if (n - z) % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binom * b.powf(-a) * scaled_upper_gamma(a, b)?;
    }
    // c2^{c1}/Γ(c1) · ϱ^{-c1} · Σ, with e^{b} folded into the incomplete gammas
    Some(s * (t.c1 * (t.c2 / rho).ln() - ln_gamma(t.c1)).exp())
}

/// `e^x Γ(a, x)` for any real `a` that is not a nonpositive integer.
fn scaled_upper_gamma(a: f64, x: f64) -> Option<f64> {
    if a > 0.0 {
        let v = (ln_gamma(a) + x).exp() * reg_gamma_upper(a, x).ok()?;
        return v.is_finite().then_some(v);
    }
    if (a - a.round()).abs() < 1e-12 {
        return None;
    }
    let steps = (-a).ceil() as u32;
    let mut s = a + steps as f64;
    let mut v = scaled_upper_gamma(s, x)?;
    for _ in 0..steps {
        s -= 1.0;
        v = (v - x.powf(s)) / s;
    }
    v.is_finite().then_some(v)
}
