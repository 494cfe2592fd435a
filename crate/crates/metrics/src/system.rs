use std::f64::consts::{E, PI};

use fsorf_channel::{Detector, FsoChannelSpec, RfNetworkSpec};
use fsorf_link::{fso_average_snr, rf_average_snr, FsoBudget, RfBudget};

use crate::error::{MetricsError, Result};

/// Default decode and outage thresholds, 5 dB.
pub const DEFAULT_THRESHOLD: f64 = 3.162_277_660_168_379_5;

/// End-to-end relay: optical hop, decode gate at `delta_th`, RF hop.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub fso: FsoChannelSpec,
    pub rf: RfNetworkSpec,
    pub delta_th: f64,
    pub gamma_th: f64,
}

impl SystemSpec {
    pub fn new(fso: FsoChannelSpec, rf: RfNetworkSpec, delta_th: f64, gamma_th: f64) -> Result<Self> {
        for (name, v) in [("delta_th", delta_th), ("gamma_th", gamma_th)] {
            if !(v >= 0.0) {
                return Err(MetricsError::InvalidParameter {
                    name,
                    value: v,
                    reason: "threshold must be nonnegative",
                });
            }
        }
        Ok(SystemSpec {
            fso,
            rf,
            delta_th,
            gamma_th,
        })
    }

    pub fn with_default_thresholds(fso: FsoChannelSpec, rf: RfNetworkSpec) -> Self {
        SystemSpec {
            fso,
            rf,
            delta_th: DEFAULT_THRESHOLD,
            gamma_th: DEFAULT_THRESHOLD,
        }
    }

    /// Rescales both hops' average SNRs from the given budgets.
    pub fn with_budgets(&self, fso: &FsoBudget, rf: &RfBudget) -> Result<Self> {
        let gbar_r = fso_average_snr(fso, self.fso.detector())?;
        let gbar_u = rf_average_snr(rf)?;
        Ok(SystemSpec {
            fso: self.fso.with_gamma_bar_r(gbar_r)?,
            rf: self.rf.with_gamma_bar_u(gbar_u)?,
            ..self.clone()
        })
    }

    /// Drives both transmitters at `ptx_dbm`.
    pub fn at_power(&self, fso: &FsoBudget, rf: &RfBudget, ptx_dbm: f64) -> Result<Self> {
        self.with_budgets(&fso.with_power_dbm(ptx_dbm), &rf.with_power_dbm(ptx_dbm))
    }

    /// SNR-to-rate constant: 1 for heterodyne, e/2π for IM/DD.
    pub fn varrho(&self) -> f64 {
        varrho(self.fso.detector())
    }
}

pub fn varrho(detector: Detector) -> f64 {
    match detector {
        Detector::Heterodyne => 1.0,
        Detector::ImDd => E / (2.0 * PI),
    }
}
