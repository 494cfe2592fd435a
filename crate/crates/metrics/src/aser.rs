use std::collections::HashMap;

use fsorf_channel::{Detector, OutdatedTerm};
use fsorf_specfun::{gauss_2f1_scaled, ln_factorial, ln_gamma, ln_pochhammer, meijer_g_scaled, MeijerGSpec, Scaled};

use crate::constellation::{ConstellationSpec, DerivTerm};
use crate::error::{unit_interval, MetricsError, Result};
use crate::system::SystemSpec;

/// Largest tolerated estimate of the dropped series tail relative to ASER.
pub const TRUNCATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesPolicy {
    /// Number of retained terms of each ₁F₁ series.
    pub z1_terms: u32,
    /// Allow IM/DD detection, whose ASER has not been validated.
    pub expert_im_dd: bool,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            z1_terms: 80,
            expert_im_dd: false,
        }
    }
}

impl SeriesPolicy {
    pub fn with_terms(z1_terms: u32) -> Self {
        SeriesPolicy {
            z1_terms,
            ..Default::default()
        }
    }
}

/// Average symbol-error rate `-∫ P_s'(γ) P_o(γ) dγ`, where `P_o` is the
/// CDF of the weaker hop, `F_R + F_U - F_R F_U`.
pub fn aser(c: &ConstellationSpec, spec: &SystemSpec, policy: SeriesPolicy) -> Result<f64> {
    Ok(aser_detailed(c, spec, policy)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AserEvaluation {
    pub value: f64,
    /// `Σ |last retained term| / ASER`.
    pub last_ratio: f64,
    /// Geometrically extrapolated dropped terms over ASER.
    pub tail_ratio: f64,
    /// Retained terms per series.
    pub terms: u32,
}

/// As `aser`, also reporting the truncation diagnostics. Fails when the
/// estimated tail exceeds `TRUNCATION_TOL` relative to the result.
pub fn aser_detailed(c: &ConstellationSpec, spec: &SystemSpec, policy: SeriesPolicy) -> Result<AserEvaluation> {
    if spec.fso.detector() == Detector::ImDd && !policy.expert_im_dd {
        return Err(MetricsError::ImDdAser);
    }
    if policy.z1_terms < 2 {
        return Err(MetricsError::InvalidParameter {
            name: "z1_terms",
            value: policy.z1_terms as f64,
            reason: "need at least two series terms",
        });
    }
    let mut kernel = Kernel::new(spec)?;
    let mut total = 0.0;
    let mut last = 0.0;
    let mut tail = 0.0;
    for term in c.derivative_terms() {
        match term {
            DerivTerm::Power { coef, psi } => total -= coef * kernel.j(0.5, psi)?.value(),
            DerivTerm::Kummer { coef, psi, kappa } => {
                let mut prev = 0.0;
                for z1 in 0..policy.z1_terms {
                    let ln_c = z1 as f64 * kappa.ln() - ln_pochhammer(1.5, z1);
                    let v = (kernel.j(z1 as f64 + 1.0, psi)?.mul_exp(ln_c) * coef).value();
                    total -= v;
                    if z1 + 1 == policy.z1_terms {
                        last += v.abs();
                        // geometric extrapolation of the dropped terms
                        let r = (v / prev).abs();
                        tail += if v == 0.0 {
                            0.0
                        } else if r < 1.0 {
                            v.abs() * r / (1.0 - r)
                        } else {
                            f64::INFINITY
                        };
                    }
                    prev = v;
                }
            }
        }
    }
    let value = unit_interval("aser", total)?;
    let (last_ratio, tail_ratio) = if value > 0.0 { (last / value, tail / value) } else { (0.0, 0.0) };
    if tail_ratio > TRUNCATION_TOL {
        return Err(MetricsError::SeriesTruncation {
            terms: policy.z1_terms,
            ratio: tail_ratio,
        });
    }
    Ok(AserEvaluation {
        value,
        last_ratio,
        tail_ratio,
        terms: policy.z1_terms,
    })
}

/// As `aser_detailed`, doubling `z1_terms` while the truncation check fails,
/// up to `max_terms`.
pub fn aser_converged(
    c: &ConstellationSpec,
    spec: &SystemSpec,
    policy: SeriesPolicy,
    max_terms: u32,
) -> Result<AserEvaluation> {
    let mut policy = policy;
    loop {
        match aser_detailed(c, spec, policy) {
            Err(MetricsError::SeriesTruncation { .. }) if policy.z1_terms * 2 <= max_terms => {
                policy.z1_terms *= 2;
            }
            r => return r.map(|e| AserEvaluation { terms: policy.z1_terms, ..e }),
        }
    }
}

/// Evaluates `J(σ, ψ) = ∫ γ^{σ-1} e^{-ψγ} P_o(γ) dγ` term by term:
/// `Σ w [𝔾(σ, ψ) + A Σ_{z<ℂ₁} ℂ₂^z/z! 𝔽(-z-σ, ℂ₂+ψ)]`.
/// The bare `A 𝔽(-σ, ψ)` contributions cancel because the weights sum to 1.
pub(crate) struct Kernel {
    terms: Vec<OutdatedTerm>,
    a: f64,
    b_over_mu: f64,
    tau1: Vec<f64>,
    tau2: Vec<f64>,
    i: usize,
    fcache: HashMap<(u64, u64), Scaled>,
}

impl Kernel {
    pub(crate) fn new(spec: &SystemSpec) -> Result<Self> {
        let fso = &spec.fso;
        Ok(Kernel {
            terms: spec.rf.outdated_terms(),
            a: fso.a_const(),
            b_over_mu: fso.b_const() / fso.mu(),
            tau1: fso.tau1(),
            tau2: fso.tau2(),
            i: fso.detector().exponent() as usize,
            fcache: HashMap::new(),
        })
    }

    pub(crate) fn j(&mut self, sigma: f64, psi: f64) -> Result<Scaled> {
        let mut total = Scaled::ZERO;
        for idx in 0..self.terms.len() {
            let t = self.terms[idx];
            let (c1, c2) = (t.c1, t.c2);
            let arg = c2 + psi;
            let mut inner = gamma_cdf_moment(c1, c2, sigma, psi)?;
            // optical CDF times the Gamma survival series
            for z in 0..c1 as u32 {
                let zf = z as f64;
                let f = self.script_f(zf + sigma, arg)?;
                inner = inner + f.mul_exp(zf * c2.ln() - ln_factorial(z)) * self.a;
            }
            total = total + inner * t.weight;
        }
        Ok(total)
    }

    /// `𝔽(-s, x) = x^{-s} G^{3i,2}_{i+2,3i+1}[B/(xμ) | 1-s, 1, τ₁; τ₂, 0]`.
    fn script_f(&mut self, s: f64, x: f64) -> Result<Scaled> {
        let key = (s.to_bits(), x.to_bits());
        if let Some(v) = self.fcache.get(&key) {
            return Ok(*v);
        }
        let mut a = vec![1.0 - s, 1.0];
        a.extend_from_slice(&self.tau1);
        let mut b = self.tau2.clone();
        b.push(0.0);
        let spec = MeijerGSpec::new(3 * self.i, 2, a, b)?;
        let v = meijer_g_scaled(&spec, self.b_over_mu / x)?.mul_exp(-s * x.ln());
        self.fcache.insert(key, v);
        Ok(v)
    }
}

/// `∫ γ^{σ-1} e^{-ψγ} P(c1, c2 γ) dγ` for integer `c1`.
///
/// The ₂F₁ form converges slowly as `c2/(c2+ψ) → 1`; there the finite
/// survival sum is subtracted from `Γ(σ) ψ^{-σ}` instead.
fn gamma_cdf_moment(c1: f64, c2: f64, sigma: f64, psi: f64) -> Result<Scaled> {
    let arg = c2 + psi;
    let z = c2 / arg;
    if z <= 0.9 {
        let ln_g = c1 * c2.ln() + ln_gamma(c1 + sigma) - ln_gamma(c1) - c1.ln() - (c1 + sigma) * arg.ln();
        return Ok(gauss_2f1_scaled(1.0, c1 + sigma, c1 + 1.0, z)?.mul_exp(ln_g));
    }
    let mut v = Scaled::from_ln(1.0, ln_gamma(sigma) - sigma * psi.ln());
    for k in 0..c1 as u32 {
        let kf = k as f64;
        let ln_t = kf * c2.ln() - ln_factorial(k) + ln_gamma(kf + sigma) - (kf + sigma) * arg.ln();
        v = v - Scaled::from_ln(1.0, ln_t);
    }
    Ok(v)
}
