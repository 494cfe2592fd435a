use std::f64::consts::PI;

use crate::{db_to_linear, dbm_to_watt, noise_power, positive, BudgetError, Result, SPEED_OF_LIGHT};

#[derive(Debug, Clone, PartialEq)]
pub struct RfBudget {
    pub p_r_dbm: f64,
    /// Carrier frequency (Hz).
    pub f_rf: f64,
    /// Path-loss exponent, within [2, 4].
    pub alpha_t: f64,
    /// Platform altitude (km).
    pub h_km: f64,
    /// Cell radius (m).
    pub r_n_m: f64,
    /// RF noise bandwidth (Hz).
    pub b_r: f64,
    pub temp_k: f64,
    /// Slant distance override; `None` uses `√(H² + R_n²)`.
    pub user_distance_m: Option<f64>,
    /// Average Nakagami branch power.
    pub omega: f64,
}

impl Default for RfBudget {
    fn default() -> Self {
        RfBudget {
            p_r_dbm: 20.0,
            f_rf: 2e9,
            alpha_t: 2.0,
            h_km: 17.0,
            r_n_m: 500.0,
            b_r: 20e6,
            temp_k: 300.0,
            user_distance_m: None,
            omega: 1.0,
        }
    }
}

impl RfBudget {
    pub fn validate(&self) -> Result<()> {
        positive("rf.f_rf", self.f_rf)?;
        positive("rf.h_km", self.h_km)?;
        positive("rf.b_r", self.b_r)?;
        positive("rf.temp_k", self.temp_k)?;
        positive("rf.omega", self.omega)?;
        if !(self.r_n_m >= 0.0 && self.r_n_m.is_finite()) {
            return Err(BudgetError::OutOfRange {
                name: "rf.r_n_m",
                value: self.r_n_m,
                reason: "must be nonnegative",
            });
        }
        if !(2.0..=4.0).contains(&self.alpha_t) {
            return Err(BudgetError::OutOfRange {
                name: "rf.alpha_t",
                value: self.alpha_t,
                reason: "path-loss exponent must lie in [2, 4]",
            });
        }
        if let Some(d) = self.user_distance_m {
            positive("rf.user_distance_m", d)?;
        }
        if !self.p_r_dbm.is_finite() {
            return Err(BudgetError::OutOfRange {
                name: "rf.p_r_dbm",
                value: self.p_r_dbm,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    pub fn with_power_dbm(&self, p_r_dbm: f64) -> Self {
        RfBudget {
            p_r_dbm,
            ..self.clone()
        }
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_rf
    }

    pub fn distance_m(&self) -> f64 {
        self.user_distance_m
            .unwrap_or_else(|| (self.h_km * 1e3).hypot(self.r_n_m))
    }

    /// Power path gain `ζ²_n` in dB, halved as printed.
    pub fn path_gain_db(&self) -> f64 {
        0.5 * (20.0 * self.wavelength().log10()
            - 20.0 * self.alpha_t * self.distance_m().log10()
            - 20.0 * (4.0 * PI).log10())
    }

    pub fn noise_power(&self) -> f64 {
        noise_power(self.b_r, self.temp_k)
    }
}

/// Average branch SNR `γ̄_U = Ω P_R ζ²_n / σ²_n`.
pub fn rf_average_snr(budget: &RfBudget) -> Result<f64> {
    budget.validate()?;
    Ok(budget.omega * dbm_to_watt(budget.p_r_dbm) * db_to_linear(budget.path_gain_db())
        / budget.noise_power())
}
