//! Gauss and Kummer hypergeometric series.

use crate::error::{Result, SpecialError};
use crate::gamma::is_nonpositive_integer;
use crate::scaled::Scaled;

const MAX_TERMS: usize = 1_000_000;
const REL_TOL: f64 = 1e-16;
const RESCALE_AT: f64 = 1e200;

/// Sums `Σ t_k` with `t_0 = 1`, `t_{k+1} = t_k · ratio(k)`.
///
/// Terms are rescaled when they grow large, so the result is a `Scaled`.
/// Stops once a term is negligible and the ratio has settled below one,
/// or when `ratio` returns exactly zero (terminating series).
fn sum_series<F>(func: &'static str, mut ratio: F) -> Result<Scaled>
where
    F: FnMut(usize) -> f64,
{
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut ln_scale = 0.0f64;
    for k in 0..MAX_TERMS {
        let r = ratio(k);
        if r == 0.0 {
            return Ok(Scaled::new(sum).mul_exp(ln_scale));
        }
        term *= r;
        sum += term;
        if !term.is_finite() || !sum.is_finite() {
            return Err(SpecialError::Overflow { func });
        }
        if term.abs() <= REL_TOL * sum.abs() && r.abs() < 1.0 {
            return Ok(Scaled::new(sum).mul_exp(ln_scale));
        }
        if sum.abs() > RESCALE_AT || term.abs() > RESCALE_AT {
            term /= RESCALE_AT;
            sum /= RESCALE_AT;
            ln_scale += RESCALE_AT.ln();
        }
    }
    Err(SpecialError::NonConvergence {
        func,
        terms: MAX_TERMS,
    })
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> Result<Scaled> {
    sum_series("gauss_2f1", |k| {
        let k = k as f64;
        (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
    })
}

/// `₂F₁(a, b; c; z)` for `0 ≤ z < 1`, extended-range result.
///
/// Direct series for `z ≤ 1/2`. Above that, the Pfaff transform
/// `(1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))` is used when it terminates; otherwise
/// the direct series is summed to convergence.
pub fn gauss_2f1_scaled(a: f64, b: f64, c: f64, z: f64) -> Result<Scaled> {
    if is_nonpositive_integer(c) {
        return Err(SpecialError::Domain {
            func: "gauss_2f1",
            detail: format!("c = {c} is a nonpositive integer"),
        });
    }
    if !(0.0..1.0).contains(&z) {
        return Err(SpecialError::Domain {
            func: "gauss_2f1",
            detail: format!("z = {z} outside [0, 1)"),
        });
    }
    if z == 0.0 {
        return Ok(Scaled::new(1.0));
    }
    if z > 0.5 {
        let w = z / (z - 1.0);
        let ln_1mz = (-z).ln_1p();
        if is_nonpositive_integer(a) || is_nonpositive_integer(c - b) {
            return Ok(gauss_series(a, c - b, c, w)?.mul_exp(-a * ln_1mz));
        }
        if is_nonpositive_integer(b) || is_nonpositive_integer(c - a) {
            return Ok(gauss_series(c - a, b, c, w)?.mul_exp(-b * ln_1mz));
        }
    }
    gauss_series(a, b, c, z)
}

/// `₂F₁(a, b; c; z)` for `0 ≤ z < 1`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let v = gauss_2f1_scaled(a, b, c, z)?.value();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::Overflow { func: "gauss_2f1" })
    }
}

/// Kummer's confluent function `₁F₁(a; b; z)`.
///
/// Negative `z` goes through `e^z ₁F₁(b-a; b; -z)` to avoid alternating sums.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(SpecialError::Domain {
            func: "kummer_1f1",
            detail: format!("b = {b} is a nonpositive integer"),
        });
    }
    let v = if z < 0.0 && !is_nonpositive_integer(a) {
        kummer_series(b - a, b, -z)?.mul_exp(z).value()
    } else {
        kummer_series(a, b, z)?.value()
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::Overflow { func: "kummer_1f1" })
    }
}

fn kummer_series(a: f64, b: f64, z: f64) -> Result<Scaled> {
    if z == 0.0 {
        return Ok(Scaled::new(1.0));
    }
    sum_series("kummer_1f1", |k| {
        let k = k as f64;
        (a + k) / ((b + k) * (k + 1.0)) * z
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_trivial_values() {
        assert_eq!(gauss_2f1(1.3, 2.2, 3.1, 0.0).unwrap(), 1.0);
        assert_relative_eq!(gauss_2f1(1.0, 2.0, 2.0, 0.5).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(gauss_2f1(1.0, 7.0, 7.0, 0.9).unwrap(), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn gauss_rejects_bad_arguments() {
        assert!(gauss_2f1(1.0, 1.0, -2.0, 0.3).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn gauss_matches_its_pfaff_transform() {
        // (1-z)^{-a} F(a, c-b; c; z/(z-1)) is summed with the raw series.
        let cases = [(1.0, 3.5, 4.5), (0.5, 1.2, 2.7), (1.0, 2.5, 3.0), (2.3, 0.7, 1.9)];
        for &(a, b, c) in &cases {
            for i in 1..=8 {
                let z = 0.05 * i as f64;
                let direct = gauss_2f1(a, b, c, z).unwrap();
                let w = z / (z - 1.0);
                let pf = gauss_series(a, c - b, c, w).unwrap().value() * (1.0 - z).powf(-a);
                assert_relative_eq!(direct, pf, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn gauss_terminating_branch_agrees_with_direct_series() {
        // c - b = -12 terminates after the Pfaff transform.
        let (a, b, c) = (1.0, 15.0, 3.0);
        for &z in &[0.55, 0.7, 0.9] {
            let t = gauss_2f1(a, b, c, z).unwrap();
            let d = gauss_series(a, b, c, z).unwrap().value();
            assert_relative_eq!(t, d, max_relative = 1e-11);
        }
    }

    #[test]
    fn kummer_identities() {
        assert_eq!(kummer_1f1(0.7, 1.3, 0.0).unwrap(), 1.0);
        for &z in &[-3.0, -0.5, 0.2, 4.0, 20.0] {
            assert_relative_eq!(kummer_1f1(1.0, 1.0, z).unwrap(), f64::exp(z), max_relative = 1e-13);
        }
    }
}
