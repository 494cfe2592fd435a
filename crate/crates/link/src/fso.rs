use std::f64::consts::PI;
use std::str::FromStr;

use fsorf_channel::Detector;

use crate::{dbm_to_watt, linear_to_db, noise_power, positive, BudgetError, Result};

/// Telescope gain formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainModel {
    /// `π²D²/λ` taken literally; not dimensionless.
    #[default]
    Paper,
    /// Diffraction-limited aperture gain `(πD/λ)²`.
    Aperture,
}

impl FromStr for GainModel {
    type Err = BudgetError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(GainModel::Paper),
            "aperture" => Ok(GainModel::Aperture),
            other => Err(BudgetError::UnknownGainModel(other.to_string())),
        }
    }
}

impl GainModel {
    pub fn as_str(self) -> &'static str {
        match self {
            GainModel::Paper => "paper",
            GainModel::Aperture => "aperture",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FsoBudget {
    pub p_s_dbm: f64,
    /// Transmit lens diameter (m).
    pub d_s: f64,
    /// Receive lens diameter (m).
    pub d_r: f64,
    /// Optical wavelength (m).
    pub lambda_f: f64,
    pub a_atm_db: f64,
    pub a_fs_db: f64,
    pub l_lenses_db: f64,
    pub m_s_db: f64,
    /// Optical receiver bandwidth (Hz).
    pub b_o: f64,
    pub temp_k: f64,
    /// Optical-to-electrical conversion coefficient.
    pub eta: f64,
    pub gain_model: GainModel,
}

impl Default for FsoBudget {
    fn default() -> Self {
        FsoBudget {
            p_s_dbm: 20.0,
            d_s: 0.15,
            d_r: 0.25,
            lambda_f: 1550e-9,
            a_atm_db: 0.5,
            a_fs_db: 268.0,
            l_lenses_db: 3.0,
            m_s_db: 3.0,
            b_o: 30e9,
            temp_k: 300.0,
            eta: 1.0,
            gain_model: GainModel::Paper,
        }
    }
}

impl FsoBudget {
    pub fn validate(&self) -> Result<()> {
        positive("fso.d_s", self.d_s)?;
        positive("fso.d_r", self.d_r)?;
        positive("fso.lambda_f", self.lambda_f)?;
        positive("fso.b_o", self.b_o)?;
        positive("fso.temp_k", self.temp_k)?;
        positive("fso.eta", self.eta)?;
        for (name, v) in [
            ("fso.a_atm_db", self.a_atm_db),
            ("fso.a_fs_db", self.a_fs_db),
            ("fso.l_lenses_db", self.l_lenses_db),
            ("fso.m_s_db", self.m_s_db),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(BudgetError::OutOfRange {
                    name,
                    value: v,
                    reason: "losses must be nonnegative dB",
                });
            }
        }
        if !self.p_s_dbm.is_finite() {
            return Err(BudgetError::OutOfRange {
                name: "fso.p_s_dbm",
                value: self.p_s_dbm,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    pub fn with_power_dbm(&self, p_s_dbm: f64) -> Self {
        FsoBudget {
            p_s_dbm,
            ..self.clone()
        }
    }

    fn gain_db(&self, d: f64) -> f64 {
        match self.gain_model {
            GainModel::Paper => linear_to_db(PI * PI * d * d / self.lambda_f),
            GainModel::Aperture => linear_to_db((PI * d / self.lambda_f).powi(2)),
        }
    }

    pub fn gain_s_db(&self) -> f64 {
        self.gain_db(self.d_s)
    }

    pub fn gain_r_db(&self) -> f64 {
        self.gain_db(self.d_r)
    }

    /// Path-loss amplitude `ζ_R` in dB: half the net power budget.
    pub fn zeta_r_db(&self) -> f64 {
        0.5 * (self.gain_s_db() + self.gain_r_db()
            - self.a_atm_db
            - self.a_fs_db
            - self.l_lenses_db
            - self.m_s_db)
    }

    /// Linear amplitude `ζ_R`.
    pub fn zeta_r(&self) -> f64 {
        10f64.powf(self.zeta_r_db() / 20.0)
    }

    pub fn noise_power(&self) -> f64 {
        noise_power(self.b_o, self.temp_k)
    }
}

/// Unit-irradiance electrical SNR `γ̄_R = (P_s ζ_R η)^i / σ²_R`.
///
/// For IM/DD the average SNR `μ₂` additionally carries the turbulence and
/// pointing moments; see `FsoChannelSpec::mu`.
pub fn fso_average_snr(budget: &FsoBudget, detector: Detector) -> Result<f64> {
    budget.validate()?;
    let amp = dbm_to_watt(budget.p_s_dbm) * budget.zeta_r() * budget.eta;
    Ok(amp.powi(detector.exponent() as i32) / budget.noise_power())
}
