//! Satellite-to-UAV optical hop: Gamma-Gamma turbulence with pointing error.

use std::f64::consts::PI;

use fsorf_specfun::{ln_gamma, meijer_g, MeijerGSpec};
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{probability, require, ChannelError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    /// Coherent detection, SNR linear in irradiance.
    Heterodyne,
    /// Intensity modulation / direct detection, SNR quadratic in irradiance.
    ImDd,
}

impl Detector {
    pub fn exponent(self) -> u32 {
        match self {
            Detector::Heterodyne => 1,
            Detector::ImDd => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FsoChannelSpec {
    alpha: f64,
    beta: f64,
    xi: f64,
    detector: Detector,
    gamma_bar_r: f64,
}

impl FsoChannelSpec {
    /// `gamma_bar_r` is the electrical SNR at unit irradiance; `mu()` maps it
    /// to the detector-specific average SNR.
    pub fn new(alpha: f64, beta: f64, xi: f64, detector: Detector, gamma_bar_r: f64) -> Result<Self> {
        require(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "must be positive")?;
        require(beta > 0.0 && beta.is_finite(), "beta", beta, "must be positive")?;
        require(xi > 0.0, "xi", xi, "must be positive")?;
        require(
            gamma_bar_r > 0.0 && gamma_bar_r.is_finite(),
            "gamma_bar_r",
            gamma_bar_r,
            "must be positive",
        )?;
        Ok(FsoChannelSpec {
            alpha,
            beta,
            xi,
            detector,
            gamma_bar_r,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn detector(&self) -> Detector {
        self.detector
    }
    pub fn gamma_bar_r(&self) -> f64 {
        self.gamma_bar_r
    }

    /// Same channel at a different unit-irradiance SNR.
    pub fn with_gamma_bar_r(&self, gamma_bar_r: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.xi, self.detector, gamma_bar_r)
    }

    fn i(&self) -> f64 {
        self.detector.exponent() as f64
    }

    /// Average electrical SNR μ_i.
    pub fn mu(&self) -> f64 {
        match self.detector {
            Detector::Heterodyne => self.gamma_bar_r,
            Detector::ImDd => {
                let (a, b, x2) = (self.alpha, self.beta, self.xi * self.xi);
                x2 * a * b * (x2 + 2.0) / ((a + 1.0) * (b + 1.0) * (x2 + 1.0).powi(2)) * self.gamma_bar_r
            }
        }
    }

    fn require_finite_xi(&self) -> Result<()> {
        require(self.xi.is_finite(), "xi", self.xi, "closed forms need finite pointing error")
    }

    /// `A = i^{α+β-2} ξ² / ((2π)^{i-1} Γ(α) Γ(β))`.
    pub fn a_const(&self) -> f64 {
        let i = self.i();
        let ln = (self.alpha + self.beta - 2.0) * i.ln() + 2.0 * self.xi.ln()
            - (i - 1.0) * (2.0 * PI).ln()
            - ln_gamma(self.alpha)
            - ln_gamma(self.beta);
        ln.exp()
    }

    /// `B = (αβ)^i / i^{2i}`.
    pub fn b_const(&self) -> f64 {
        let i = self.i();
        (self.alpha * self.beta).powf(i) / i.powf(2.0 * i)
    }

    pub fn tau1(&self) -> Vec<f64> {
        let x2 = self.xi * self.xi;
        match self.detector {
            Detector::Heterodyne => vec![x2 + 1.0],
            Detector::ImDd => vec![(x2 + 1.0) / 2.0, (x2 + 2.0) / 2.0],
        }
    }

    pub fn tau2(&self) -> Vec<f64> {
        let x2 = self.xi * self.xi;
        let (a, b) = (self.alpha, self.beta);
        match self.detector {
            Detector::Heterodyne => vec![x2, a, b],
            Detector::ImDd => vec![
                x2 / 2.0,
                (x2 + 1.0) / 2.0,
                a / 2.0,
                (a + 1.0) / 2.0,
                b / 2.0,
                (b + 1.0) / 2.0,
            ],
        }
    }

    /// Parameters of `G^{3i,1}_{i+1,3i+1}[· | 1, τ₁; τ₂, 0]`.
    pub fn cdf_kernel(&self) -> Result<MeijerGSpec> {
        self.require_finite_xi()?;
        let i = self.detector.exponent() as usize;
        let mut a = vec![1.0];
        a.extend(self.tau1());
        let mut b = self.tau2();
        b.push(0.0);
        Ok(MeijerGSpec::new(3 * i, 1, a, b)?)
    }

    fn pdf_kernel(&self) -> Result<MeijerGSpec> {
        self.require_finite_xi()?;
        let x2 = self.xi * self.xi;
        Ok(MeijerGSpec::new(
            3,
            0,
            vec![x2 + 1.0],
            vec![x2, self.alpha, self.beta],
        )?)
    }

    /// Weakest pole exponent `min(ξ², α, β)/i` of the CDF near zero.
    pub fn diversity(&self) -> f64 {
        (self.xi * self.xi).min(self.alpha).min(self.beta) / self.i()
    }
}

/// Density of the FSO SNR.
pub fn fso_snr_pdf(spec: &FsoChannelSpec, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(ChannelError::Domain {
            func: "fso_snr_pdf",
            x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let i = spec.i();
    let z = spec.alpha * spec.beta * (x / spec.mu()).powf(1.0 / i);
    let g = meijer_g(&spec.pdf_kernel()?, z)?;
    let c = (2.0 * spec.xi.ln() - ln_gamma(spec.alpha) - ln_gamma(spec.beta)).exp();
    Ok((c / (i * x) * g).max(0.0))
}

/// CDF of the FSO SNR, `A·G^{3i,1}_{i+1,3i+1}[Bx/μ_i | 1, τ₁; τ₂, 0]`.
pub fn fso_snr_cdf(spec: &FsoChannelSpec, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(ChannelError::Domain {
            func: "fso_snr_cdf",
            x,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let z = spec.b_const() * x / spec.mu();
    // survival ~ exp(-2i z^{1/(2i)}) is far below f64 resolution here
    let i = spec.detector.exponent() as f64;
    if 2.0 * i * z.powf(0.5 / i) > 1000.0 {
        return Ok(1.0);
    }
    let g = meijer_g(&spec.cdf_kernel()?, z)?;
    probability("fso_snr_cdf", spec.a_const() * g)
}

/// Draws FSO SNRs as `μ_i (X·Y·I_p)^i`.
///
/// `X ~ Gamma(α, 1/α)` and `Y ~ Gamma(β, 1/β)` are the unit-mean turbulence
/// factors. The pointing loss `I_p = exp(-2r²/w²)` comes from a Rayleigh
/// radial displacement `r` with unit jitter and beam radius `w = 2ξ`, so
/// `I_p = U^{1/ξ²}`. Under this normalization the sample law has CDF
/// `fso_snr_cdf` with the same `μ_i`.
#[derive(Debug, Clone)]
pub struct FsoSampler {
    large: Gamma<f64>,
    small: Gamma<f64>,
    inv_xi2: f64,
    mu: f64,
    exponent: i32,
}

impl FsoSampler {
    pub fn new(spec: &FsoChannelSpec) -> Self {
        FsoSampler {
            large: Gamma::new(spec.alpha, 1.0 / spec.alpha).expect("validated shape"),
            small: Gamma::new(spec.beta, 1.0 / spec.beta).expect("validated shape"),
            inv_xi2: 1.0 / (spec.xi * spec.xi),
            mu: spec.mu(),
            exponent: spec.detector.exponent() as i32,
        }
    }

    /// Normalized irradiance `I_a · I_p / A₀`.
    pub fn irradiance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let ia = self.large.sample(rng) * self.small.sample(rng);
        let u = 1.0 - rng.gen::<f64>();
        let r2 = -2.0 * u.ln();
        // beam radius w = 2ξ: exp(-2 r² / w²) = exp(-r² / (2ξ²))
        let ip = (-0.5 * r2 * self.inv_xi2).exp();
        ia * ip
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.mu * self.irradiance(rng).powi(self.exponent)
    }
}

pub fn sample_fso_snr<R: Rng + ?Sized>(spec: &FsoChannelSpec, rng: &mut R) -> f64 {
    FsoSampler::new(spec).sample(rng)
}
