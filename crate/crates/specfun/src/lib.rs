//! Real special functions for the FSO/RF relay analytics.
//!
//! Gamma-family ratios, Gauss and Kummer hypergeometric series, the Gaussian
//! tail, a Meijer G-function evaluator and adaptive quadrature.

mod error;
mod gamma;
mod hypergeometric;
mod meijer;
mod normal;
mod quadrature;
mod scaled;

pub use error::{Result, SpecialError};
pub use gamma::{
    gamma, ln_factorial, ln_gamma, ln_gamma_signed, ln_pochhammer, pochhammer, reg_gamma_lower,
    reg_gamma_upper,
};
pub use hypergeometric::{gauss_2f1, gauss_2f1_scaled, kummer_1f1};
pub use meijer::{
    meijer_g, meijer_g_contour, meijer_g_residues, meijer_g_scaled, residue_leading_terms,
    MeijerGSpec, COALESCE_TOL, MAX_SERIES_TERMS, SERIES_REL_TOL,
};
pub use normal::{erfc, gaussian_q};
pub use quadrature::{integrate, integrate_semi_infinite, integrate_semi_infinite_with, QuadOptions};
pub use scaled::Scaled;

/// Agreement demanded between closed forms and their quadrature oracles.
pub const ORACLE_TOL: f64 = 1e-8;
