//! Monte Carlo estimators for the relay metrics.
//!
//! Every estimator draws the optical SNR and the delivered RF SNR from the
//! channel samplers and averages a per-sample statistic. Samples are split
//! into fixed blocks with their own RNG streams, which makes estimates
//! reproducible bit for bit regardless of the worker count.

mod engine;

use std::f64::consts::LN_2;

use fsorf_channel::{FsoSampler, RfSampler, RngStream};
use fsorf_metrics::{conditional_sep, ConstellationSpec, SystemSpec};
use rand::Rng;

pub use engine::{run, Moments, BLOCK_SIZE};

/// Sample count below which standard errors are flagged as unreliable.
pub const MIN_RELIABLE_SAMPLES: u64 = 10_000;

/// How the effective capacity is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EffectiveMode {
    /// `-(1/θ) ln E[e^{-θ r}]` over the gated end-to-end rate.
    Strict,
    /// `-(1/θ) P[φ=1] ln E[(1+ϱγ̂)^{-θ/(2 ln 2)}]`, the factored form the
    /// closed-form expression is built on.
    #[default]
    Paper,
}

/// SNR whose conditional SEP is averaged by `simulate_aser`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AserSnr {
    /// `min(γ_R, γ̂)`, matching the analytic ASER.
    #[default]
    WeakerHop,
    /// `φ(γ_R)·γ̂`, zero when the relay fails to decode.
    Gated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub system: SystemSpec,
    pub n_samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub effective_mode: EffectiveMode,
    pub aser_snr: AserSnr,
}

impl SimConfig {
    /// Worker count comes from `FSORF_WORKERS`, else the available cores.
    pub fn new(system: SystemSpec, n_samples: u64, seed: u64) -> Self {
        SimConfig {
            system,
            n_samples,
            seed,
            workers: default_workers(),
            effective_mode: EffectiveMode::default(),
            aser_snr: AserSnr::default(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn warning(&self) -> Option<String> {
        (self.n_samples < MIN_RELIABLE_SAMPLES).then(|| {
            format!(
                "{} samples is below {MIN_RELIABLE_SAMPLES}; standard errors are unreliable",
                self.n_samples
            )
        })
    }
}

pub fn default_workers() -> usize {
    std::env::var("FSORF_WORKERS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n: u64,
}

impl Estimate {
    /// Whether `x` lies within `k` standard errors.
    pub fn covers(&self, x: f64, k: f64) -> bool {
        (self.value - x).abs() <= k * self.std_error
    }
}

/// One joint draw of both hops.
#[derive(Debug, Clone)]
pub struct HopSampler {
    fso: FsoSampler,
    rf: RfSampler,
    delta_th: f64,
}

impl HopSampler {
    pub fn new(spec: &SystemSpec) -> Self {
        HopSampler {
            fso: FsoSampler::new(&spec.fso),
            rf: RfSampler::new(&spec.rf),
            delta_th: spec.delta_th,
        }
    }

    /// `(γ_R, γ̂)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let g_r = self.fso.sample(rng);
        (g_r, self.rf.sample(rng))
    }

    pub fn gate(&self, g_r: f64) -> bool {
        g_r >= self.delta_th
    }

    /// `φ(γ_R)·γ̂`.
    pub fn e2e<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (g_r, g_u) = self.draw(rng);
        if self.gate(g_r) {
            g_u
        } else {
            0.0
        }
    }
}

/// End-to-end SNR `φ(γ_R)·γ̂`: the RF SNR if the relay decodes, else 0.
pub fn sample_e2e(spec: &SystemSpec, rng: &mut RngStream) -> f64 {
    HopSampler::new(spec).e2e(rng)
}

/// `min(γ_R, γ̂)`.
pub fn sample_weaker_hop(spec: &SystemSpec, rng: &mut RngStream) -> f64 {
    let (g_r, g_u) = HopSampler::new(spec).draw(rng);
    g_r.min(g_u)
}

/// Fraction of draws where the relay fails to decode or `γ̂ < γ_th`, with
/// the binomial standard error.
pub fn simulate_outage(cfg: &SimConfig) -> Estimate {
    let s = HopSampler::new(&cfg.system);
    let gamma_th = cfg.system.gamma_th;
    let [m] = run(cfg.n_samples, cfg.seed, cfg.workers, |rng| {
        let (g_r, g_u) = s.draw(rng);
        [if !s.gate(g_r) || g_u < gamma_th { 1.0 } else { 0.0 }]
    });
    let p = m.mean;
    Estimate {
        value: p,
        std_error: (p * (1.0 - p) / m.n as f64).sqrt(),
        n: m.n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapacityKind {
    Ergodic,
    /// Delay exponent `θ > 0`.
    Effective(f64),
}

/// Ergodic or effective capacity in bits/s/Hz with the ½ half-duplex factor.
///
/// # Panics
/// If the effective-capacity exponent is not positive.
pub fn simulate_capacity(cfg: &SimConfig, kind: CapacityKind) -> Estimate {
    let s = HopSampler::new(&cfg.system);
    let rho = cfg.system.varrho();
    let rate = |g: f64| 0.5 * (rho * g).ln_1p() / LN_2;
    match kind {
        CapacityKind::Ergodic => {
            let [m] = run(cfg.n_samples, cfg.seed, cfg.workers, |rng| [rate(s.e2e(rng))]);
            Estimate {
                value: m.mean,
                std_error: m.std_error(),
                n: m.n,
            }
        }
        CapacityKind::Effective(theta) => {
            assert!(theta > 0.0, "delay exponent must be positive");
            match cfg.effective_mode {
                EffectiveMode::Strict => {
                    let [m] = run(cfg.n_samples, cfg.seed, cfg.workers, |rng| {
                        [(-theta * rate(s.e2e(rng))).exp()]
                    });
                    Estimate {
                        value: -m.mean.ln() / theta,
                        std_error: m.std_error() / (theta * m.mean),
                        n: m.n,
                    }
                }
                EffectiveMode::Paper => {
                    let [pass, mom] = run(cfg.n_samples, cfg.seed, cfg.workers, |rng| {
                        let (g_r, g_u) = s.draw(rng);
                        [if s.gate(g_r) { 1.0 } else { 0.0 }, (-theta * rate(g_u)).exp()]
                    });
                    let (p, ln_m) = (pass.mean, mom.mean.ln());
                    // delta method; the two factors come from independent hops
                    let var = (ln_m / theta).powi(2) * p * (1.0 - p) / pass.n as f64
                        + (p / (theta * mom.mean)).powi(2) * mom.variance() / mom.n as f64;
                    Estimate {
                        value: -p * ln_m / theta,
                        std_error: var.sqrt(),
                        n: pass.n,
                    }
                }
            }
        }
    }
}

/// Semi-analytic ASER: the AWGN conditional SEP averaged over channel draws.
pub fn simulate_aser(cfg: &SimConfig, c: &ConstellationSpec) -> Estimate {
    let s = HopSampler::new(&cfg.system);
    let mode = cfg.aser_snr;
    let [m] = run(cfg.n_samples, cfg.seed, cfg.workers, |rng| {
        let (g_r, g_u) = s.draw(rng);
        let g = match mode {
            AserSnr::WeakerHop => g_r.min(g_u),
            AserSnr::Gated if s.gate(g_r) => g_u,
            AserSnr::Gated => 0.0,
        };
        [conditional_sep(c, g)]
    });
    Estimate {
        value: m.mean,
        std_error: m.std_error(),
        n: m.n,
    }
}
