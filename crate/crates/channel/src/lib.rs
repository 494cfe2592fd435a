//! Channel laws for the satellite→UAV→users relay.
//!
//! The optical hop follows Gamma-Gamma turbulence with Rayleigh-jitter
//! pointing error, under heterodyne or IM/DD detection. The RF hop is
//! Nakagami-m with MRT over `N_t` antennas, opportunistic selection among `N`
//! users, and selection made on CSI correlated by `ρ` with the channel in use.

mod error;
mod fso;
mod rf;
mod rng;

pub use error::{ChannelError, Result};
pub use fso::{fso_snr_cdf, fso_snr_pdf, sample_fso_snr, Detector, FsoChannelSpec, FsoSampler};
pub use rf::{
    best_user_outdated_cdf, best_user_outdated_pdf, phi_coeffs, sample_best_user_outdated,
    OutdatedCdf, OutdatedTerm, RfNetworkSpec, RfSampler,
};
pub use rng::RngStream;
