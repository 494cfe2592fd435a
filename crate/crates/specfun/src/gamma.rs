//! Gamma function family.
//!
//! Log-gamma comes from `libm`, the regularized incomplete gamma ratios from
//! `statrs`; negative arguments go through the reflection formula.

use std::f64::consts::PI;

use crate::error::{Result, SpecialError};
use statrs::function::gamma as sg;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Γ(x)`; infinite at the poles.
pub fn gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    libm::tgamma(x)
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `(ln|Γ(x)|, sign Γ(x))` for any real `x`.
///
/// Poles return `(+∞, 1.0)` so that a pole in a denominator contributes a
/// factor `exp(-∞) = 0`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (libm::lgamma(x), 1.0);
    }
    if is_nonpositive_integer(x) {
        return (f64::INFINITY, 1.0);
    }
    let fl = x.floor();
    let frac = x - fl;
    let sign = if (fl as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let ln_abs = PI.ln() - (PI * frac).sin().ln() - libm::lgamma(1.0 - x);
    (ln_abs, sign)
}

/// Regularized lower incomplete gamma `P(a, x) = Υ(a, x) / Γ(a)`.
pub fn reg_gamma_lower(a: f64, x: f64) -> Result<f64> {
    check_incomplete_args("reg_gamma_lower", a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(sg::gamma_lr(a, x))
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
pub fn reg_gamma_upper(a: f64, x: f64) -> Result<f64> {
    check_incomplete_args("reg_gamma_upper", a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(sg::gamma_ur(a, x))
}

fn check_incomplete_args(func: &'static str, a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(SpecialError::Domain {
            func,
            detail: format!("shape a = {a} must be positive"),
        });
    }
    if !(x >= 0.0) {
        return Err(SpecialError::Domain {
            func,
            detail: format!("x = {x} must be nonnegative"),
        });
    }
    Ok(())
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + k as f64))
}

/// `ln (a)_n` for `a > 0`.
pub fn ln_pochhammer(a: f64, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n < 32 {
        return pochhammer(a, n).ln();
    }
    ln_gamma(a + n as f64) - ln_gamma(a)
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}
