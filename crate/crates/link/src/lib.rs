//! Link budgets for the optical satellite→UAV hop and the RF UAV→user hop.
//!
//! Defaults reproduce the reference parameter table: 1550 nm optics with
//! 15/25 cm lenses, 268 dB free-space loss, 30 GHz optical bandwidth, and a
//! 2 GHz RF carrier from a platform at 17 km over a 500 m cell.

mod fso;
mod rf;

pub use fso::{fso_average_snr, FsoBudget, GainModel};
pub use rf::{rf_average_snr, RfBudget};

use thiserror::Error;

/// Boltzmann constant as used by the budget (J/K).
pub const BOLTZMANN: f64 = 1.38e-23;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BudgetError {
    #[error("{name} = {value}: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("unknown gain model {0:?} (expected \"paper\" or \"aperture\")")]
    UnknownGainModel(String),
}

pub type Result<T> = std::result::Result<T, BudgetError>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(BudgetError::OutOfRange {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

/// Thermal noise power `κBT` in watts.
pub fn noise_power(bandwidth_hz: f64, temp_k: f64) -> f64 {
    BOLTZMANN * bandwidth_hz * temp_k
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watt(dbm: f64) -> f64 {
    db_to_linear(dbm) * 1e-3
}

pub fn watt_to_dbm(w: f64) -> f64 {
    linear_to_db(w * 1e3)
}
