//! UAV-to-user RF hop: Nakagami-m MRT branches, best-user selection on
//! outdated CSI.
//!
//! With `L = mN_t`, each user's SNR is `Gamma(L, γ̄_U/m)`. The UAV picks the
//! user with the largest stale SNR; the delivered SNR is its concomitant.
//! Its CDF is a signed mixture of Gamma CDFs,
//! `F(x) = N Σ_{k,l,j} ℂ₀ ℂ₂^{-ℂ₁} Υ(ℂ₁, ℂ₂x)`.

use fsorf_specfun::{gamma, ln_gamma, reg_gamma_lower};
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{probability, require, ChannelError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RfNetworkSpec {
    m: u32,
    n_t: u32,
    n_users: u32,
    rho: f64,
    gamma_bar_u: f64,
}

impl RfNetworkSpec {
    /// `m` must be a positive integer; the finite multinomial sums need it.
    pub fn new(m: f64, n_t: u32, n_users: u32, rho: f64, gamma_bar_u: f64) -> Result<Self> {
        require(
            m >= 1.0 && m == m.floor() && m < u32::MAX as f64,
            "m",
            m,
            "Nakagami severity must be a positive integer",
        )?;
        require(n_t >= 1, "n_t", n_t as f64, "need at least one antenna")?;
        require(n_users >= 1, "n_users", n_users as f64, "need at least one user")?;
        require((0.0..=1.0).contains(&rho), "rho", rho, "correlation must lie in [0, 1]")?;
        require(
            gamma_bar_u > 0.0 && gamma_bar_u.is_finite(),
            "gamma_bar_u",
            gamma_bar_u,
            "must be positive",
        )?;
        Ok(RfNetworkSpec {
            m: m as u32,
            n_t,
            n_users,
            rho,
            gamma_bar_u,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n_t(&self) -> u32 {
        self.n_t
    }
    pub fn n_users(&self) -> u32 {
        self.n_users
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn gamma_bar_u(&self) -> f64 {
        self.gamma_bar_u
    }

    /// Branch shape `L = mN_t`.
    pub fn big_l(&self) -> u32 {
        self.m * self.n_t
    }

    pub fn with_gamma_bar_u(&self, gamma_bar_u: f64) -> Result<Self> {
        Self::new(self.m as f64, self.n_t, self.n_users, self.rho, gamma_bar_u)
    }

    /// Mixture terms of the delivered-SNR law.
    pub fn outdated_terms(&self) -> Vec<OutdatedTerm> {
        outdated_terms(self)
    }

    /// High-SNR diversity of the RF hop.
    pub fn diversity(&self) -> f64 {
        if self.rho == 1.0 {
            (self.n_users * self.big_l()) as f64
        } else {
            self.big_l() as f64
        }
    }
}

/// Coefficients of `x^l` in `(Σ_{q<L} x^q/q!)^k`, by the J.C.P. Miller
/// power recursion.
pub fn phi_coeffs(k: u32, big_l: u32) -> Vec<f64> {
    assert!(big_l >= 1, "big_l must be positive");
    let len = (k * (big_l - 1) + 1) as usize;
    let delta: Vec<f64> = (0..big_l).map(|q| 1.0 / gamma(q as f64 + 1.0)).collect();
    let kf = k as f64;
    let mut phi = vec![0.0; len];
    phi[0] = 1.0;
    for l in 1..len {
        let lf = l as f64;
        let top = l.min(big_l as usize - 1);
        let s: f64 = (1..=top)
            .map(|q| {
                let qf = q as f64;
                (qf * kf - lf + qf) * delta[q] * phi[l - q]
            })
            .sum();
        phi[l] = s / (lf * delta[0]);
    }
    phi
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// One `(k, l, j)` term: `ℂ₀ x^{ℂ₁-1} e^{-ℂ₂x}` in the density (times N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutdatedTerm {
    pub k: u32,
    pub l: u32,
    pub j: u32,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// `N ℂ₀ ℂ₂^{-ℂ₁} Γ(ℂ₁)`: mass carried by the term's Gamma law.
    pub weight: f64,
}

impl OutdatedTerm {
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.weight * reg_gamma_lower(self.c1, self.c2 * x)?)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let ln = self.c1 * self.c2.ln() + (self.c1 - 1.0) * x.ln() - self.c2 * x - ln_gamma(self.c1);
        self.weight * ln.exp()
    }
}

fn outdated_terms(spec: &RfNetworkSpec) -> Vec<OutdatedTerm> {
    let big_l = spec.big_l();
    let lf = big_l as f64;
    let (m, rho, gbar) = (spec.m as f64, spec.rho, spec.gamma_bar_u);
    let n = spec.n_users;
    let mut terms = Vec::new();
    for k in 0..n {
        let phi = phi_coeffs(k, big_l);
        let kf = k as f64;
        let denom = 1.0 + kf * (1.0 - rho);
        let c2 = m * (kf + 1.0) / (gbar * denom);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (l, &phi_l) in phi.iter().enumerate() {
            let l = l as u32;
            for j in 0..=l {
                let c1 = lf + j as f64;
                let corr = rho.powi(j as i32) * (1.0 - rho).powi((l - j) as i32);
                if corr == 0.0 {
                    continue;
                }
                let ln_mag = (m / gbar).ln() * c1 + ln_gamma(lf + l as f64)
                    - ln_gamma(lf)
                    - ln_gamma(c1)
                    - (lf + l as f64 + j as f64) * denom.ln();
                let c0 = sign * binom(n - 1, k) * binom(l, j) * phi_l * corr * ln_mag.exp();
                let ln_w = ln_mag + ln_gamma(c1) - c1 * c2.ln();
                let weight =
                    n as f64 * sign * binom(n - 1, k) * binom(l, j) * phi_l * corr * ln_w.exp();
                terms.push(OutdatedTerm {
                    k,
                    l,
                    j,
                    c0,
                    c1,
                    c2,
                    weight,
                });
            }
        }
    }
    terms
}

/// Density of the delivered SNR of the selected user.
pub fn best_user_outdated_pdf(spec: &RfNetworkSpec, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(ChannelError::Domain {
            func: "best_user_outdated_pdf",
            x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(outdated_terms(spec).iter().map(|t| t.pdf(x)).sum::<f64>().max(0.0))
}

/// CDF of the delivered SNR of the selected user.
pub fn best_user_outdated_cdf(spec: &RfNetworkSpec, x: f64) -> Result<f64> {
    cdf_from_terms(&outdated_terms(spec), x)
}

pub(crate) fn cdf_from_terms(terms: &[OutdatedTerm], x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(ChannelError::Domain {
            func: "best_user_outdated_cdf",
            x,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut s = 0.0;
    for t in terms {
        s += t.cdf(x)?;
    }
    probability("best_user_outdated_cdf", s)
}

/// Precomputed mixture for repeated CDF evaluation.
#[derive(Debug, Clone)]
pub struct OutdatedCdf {
    terms: Vec<OutdatedTerm>,
}

impl OutdatedCdf {
    pub fn new(spec: &RfNetworkSpec) -> Self {
        OutdatedCdf {
            terms: outdated_terms(spec),
        }
    }

    pub fn terms(&self) -> &[OutdatedTerm] {
        &self.terms
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        cdf_from_terms(&self.terms, x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.pdf(x)).sum::<f64>().max(0.0)
    }
}

/// Selected-user SNR sampler.
///
/// Branch SNRs are i.i.d. `Gamma(L, γ̄/m)`; the largest, `y`, is the stale
/// estimate. The delivered SNR given `y` follows the Kibble bivariate Gamma
/// conditional, drawn as the Poisson mixture
/// `P ~ Poisson(ρmy/(γ̄(1-ρ)))`, `γ̂ ~ Gamma(L + P, γ̄(1-ρ)/m)`.
#[derive(Debug, Clone)]
pub struct RfSampler {
    branch: Gamma<f64>,
    n_users: u32,
    big_l: f64,
    rho: f64,
    rate_scale: f64,
    cond_scale: f64,
}

impl RfSampler {
    pub fn new(spec: &RfNetworkSpec) -> Self {
        let big_l = spec.big_l() as f64;
        let m = spec.m as f64;
        RfSampler {
            branch: Gamma::new(big_l, spec.gamma_bar_u / m).expect("validated shape"),
            n_users: spec.n_users,
            big_l,
            rho: spec.rho,
            rate_scale: spec.rho * m / (spec.gamma_bar_u * (1.0 - spec.rho)),
            cond_scale: spec.gamma_bar_u * (1.0 - spec.rho) / m,
        }
    }

    /// Best stale branch SNR.
    pub fn selected<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        (0..self.n_users)
            .map(|_| self.branch.sample(rng))
            .fold(0.0, f64::max)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let y = self.selected(rng);
        if self.rho == 1.0 {
            return y;
        }
        let extra = if self.rho == 0.0 {
            0.0
        } else {
            let lambda = self.rate_scale * y;
            Poisson::new(lambda).expect("positive rate").sample(rng)
        };
        Gamma::new(self.big_l + extra, self.cond_scale)
            .expect("positive shape")
            .sample(rng)
    }
}

pub fn sample_best_user_outdated<R: Rng + ?Sized>(spec: &RfNetworkSpec, rng: &mut R) -> f64 {
    RfSampler::new(spec).sample(rng)
}
