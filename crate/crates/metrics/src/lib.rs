//! Closed-form performance metrics of the FSO/RF relay: outage and its
//! high-SNR asymptote, ergodic and effective capacity, and the average
//! symbol-error rate of hexagonal, rectangular and cross QAM.

mod aser;
mod capacity;
mod constellation;
mod error;
mod outage;
mod system;

pub use aser::{aser, aser_converged, aser_detailed, AserEvaluation, SeriesPolicy, TRUNCATION_TOL};
pub use capacity::{effective_capacity, ergodic_capacity, EffectiveCapacity, CLOSED_FORM_WARN};
pub use constellation::{
    conditional_sep, conditional_sep_derivative, hqam_params, ConstellationSpec, DerivTerm, Family,
    SepConstants,
};
pub use error::{MetricsError, Result};
pub use outage::{asymptotic_outage, diversity_order, outage, rf_asymptotic_cdf};
pub use system::{varrho, SystemSpec, DEFAULT_THRESHOLD};
