//! Meijer G-function for real parameters and positive real argument.
//!
//! With Φ(s) = Π_{j≤m} Γ(b_j+s) Π_{j≤n} Γ(1-a_j-s) / (Π_{j>m} Γ(1-b_j-s) Π_{j>n} Γ(a_j+s)),
//! G^{m,n}_{p,q}(x) = (1/2πi) ∫ Φ(s) x^{-s} ds along a vertical line separating
//! the poles of the two numerator groups.
//!
//! Two evaluators are used:
//!
//! * the residue (Slater) sum over the poles `s = -b_h - k`, h ≤ m. Each pole
//!   family gives a generalized hypergeometric series in `x`.
//! * the line integral itself, trapezoid rule on `s = c + it` with complex
//!   log-gamma. Trapezoid sums of analytic integrands converge geometrically
//!   in the step.
//!
//! The residue sum is tried first. It is abandoned when poles coalesce
//! (integer-spaced `b_h`), or when its alternating terms cancel by more than
//! `MAX_CANCELLATION`, which is what happens at large `x`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SpecialError};
use crate::gamma::{is_nonpositive_integer, ln_gamma_signed};
use crate::scaled::Scaled;

/// Relative truncation tolerance of the residue series.
pub const SERIES_REL_TOL: f64 = 1e-10;
/// Pole spacings closer than this to an integer count as coalescing.
pub const COALESCE_TOL: f64 = 1e-9;
pub const MAX_SERIES_TERMS: usize = 100_000;

const MAX_CANCELLATION: f64 = 1e4;
const TERM_STOP: f64 = 1e-17;
const OVERFLOW_GUARD: f64 = 1e250;
const MAX_LINE_NODES: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(SpecialError::UnsupportedClass(format!(
                "m={m}, n={n} with p={}, q={}",
                a.len(),
                b.len()
            )));
        }
        if m == 0 && n == 0 {
            return Err(SpecialError::UnsupportedClass("m = n = 0".into()));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(SpecialError::UnsupportedClass("non-finite parameter".into()));
        }
        Ok(MeijerGSpec { m, n, a, b })
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.a.len()
    }
    pub fn q(&self) -> usize {
        self.b.len()
    }
    pub fn a(&self) -> &[f64] {
        &self.a
    }
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `G^{m,n}_{p,q}(x | a; b) = G^{n,m}_{q,p}(1/x | 1-b; 1-a)`.
    pub fn inverted(&self) -> MeijerGSpec {
        MeijerGSpec {
            m: self.n,
            n: self.m,
            a: self.b.iter().map(|v| 1.0 - v).collect(),
            b: self.a.iter().map(|v| 1.0 - v).collect(),
        }
    }

    /// True when two of the first `m` b-parameters differ by an integer.
    pub fn has_coalescing_poles(&self) -> bool {
        let bm = &self.b[..self.m];
        bm.iter().enumerate().any(|(h, &bh)| {
            bm.iter()
                .skip(h + 1)
                .any(|&bj| ((bh - bj) - (bh - bj).round()).abs() < COALESCE_TOL)
        })
    }

    fn residue_friendly(&self) -> bool {
        if self.has_coalescing_poles() {
            return false;
        }
        self.b[..self.m].iter().all(|&bh| {
            self.a[..self.n]
                .iter()
                .all(|&aj| !is_nonpositive_integer(1.0 + bh - aj))
                && self.b[self.m..]
                    .iter()
                    .all(|&bj| !is_nonpositive_integer(1.0 + bh - bj))
        })
    }
}

fn check_argument(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SpecialError::Domain {
            func: "meijer_g",
            detail: format!("x = {x} must be positive and finite"),
        })
    }
}

/// G-function value.
pub fn meijer_g(spec: &MeijerGSpec, x: f64) -> Result<f64> {
    let v = meijer_g_scaled(spec, x)?.value();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::Overflow { func: "meijer_g" })
    }
}

/// G-function value in extended range.
pub fn meijer_g_scaled(spec: &MeijerGSpec, x: f64) -> Result<Scaled> {
    check_argument(x)?;
    if spec.p() > spec.q() {
        return meijer_g_scaled(&spec.inverted(), 1.0 / x);
    }
    if spec.p() == spec.q() {
        return Err(SpecialError::UnsupportedClass("p = q".into()));
    }
    if spec.residue_friendly() {
        let spread = (spec.q() - spec.p()) as f64;
        if spread * x.powf(1.0 / spread) < 60.0 {
            if let Some(v) = residues(spec, x)? {
                return Ok(v);
            }
        }
    }
    contour(spec, x)
}

/// Residue-sum evaluation regardless of conditioning (for cross-checks).
pub fn meijer_g_residues(spec: &MeijerGSpec, x: f64) -> Result<Scaled> {
    check_argument(x)?;
    if spec.p() >= spec.q() {
        return Err(SpecialError::UnsupportedClass("residue sum needs q > p".into()));
    }
    if !spec.residue_friendly() {
        return Err(SpecialError::UnsupportedClass("coalescing poles".into()));
    }
    residue_sum(spec, x).map(|r| r.value)
}

/// Line-integral evaluation (for cross-checks).
pub fn meijer_g_contour(spec: &MeijerGSpec, x: f64) -> Result<Scaled> {
    check_argument(x)?;
    contour(spec, x)
}

/// `ln|C_h|` and sign of the residue coefficient at `s = -b_h`.
fn residue_coefficient(spec: &MeijerGSpec, h: usize) -> (f64, f64) {
    let (m, n) = (spec.m, spec.n);
    let bh = spec.b[h];
    let mut ln_c = 0.0;
    let mut sign = 1.0;
    let mut acc = |arg: f64, num: bool| {
        let (l, s) = ln_gamma_signed(arg);
        if num {
            ln_c += l;
        } else {
            ln_c -= l;
        }
        sign *= s;
    };
    for (j, &bj) in spec.b.iter().enumerate() {
        if j < m && j != h {
            acc(bj - bh, true);
        } else if j >= m {
            acc(1.0 + bh - bj, false);
        }
    }
    for (j, &aj) in spec.a.iter().enumerate() {
        if j < n {
            acc(1.0 + bh - aj, true);
        } else {
            acc(aj - bh, false);
        }
    }
    (ln_c, sign)
}

/// Leading (k = 0) residue terms `C_h x^{b_h}`, one per pole family.
pub fn residue_leading_terms(spec: &MeijerGSpec, x: f64) -> Result<Vec<f64>> {
    check_argument(x)?;
    if !spec.residue_friendly() {
        return Err(SpecialError::UnsupportedClass("coalescing poles".into()));
    }
    Ok((0..spec.m)
        .map(|h| {
            let (ln_c, sign) = residue_coefficient(spec, h);
            Scaled::from_ln(sign, ln_c + spec.b[h] * x.ln()).value()
        })
        .collect())
}

struct ResidueSum {
    value: Scaled,
    magnitude: Scaled,
    overflowed: bool,
}

fn residue_sum(spec: &MeijerGSpec, x: f64) -> Result<ResidueSum> {
    let alt = if (spec.p() + spec.m + spec.n) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    let mut value = Scaled::ZERO;
    let mut magnitude = Scaled::ZERO;
    for h in 0..spec.m {
        let (ln_c, sign) = residue_coefficient(spec, h);
        if ln_c == f64::NEG_INFINITY {
            continue;
        }
        let bh = spec.b[h];
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut sum_abs = 1.0f64;
        let mut converged = false;
        for k in 0..MAX_SERIES_TERMS {
            let kf = k as f64;
            let mut r = alt * x / (kf + 1.0);
            for &aj in &spec.a {
                r *= 1.0 + bh - aj + kf;
            }
            for (j, &bj) in spec.b.iter().enumerate() {
                if j != h {
                    r /= 1.0 + bh - bj + kf;
                }
            }
            term *= r;
            sum += term;
            sum_abs += term.abs();
            if term == 0.0 || (term.abs() <= TERM_STOP * sum_abs && r.abs() < 1.0) {
                converged = true;
                break;
            }
            if sum_abs > OVERFLOW_GUARD {
                return Ok(ResidueSum {
                    value: Scaled::ZERO,
                    magnitude: Scaled::ZERO,
                    overflowed: true,
                });
            }
        }
        if !converged {
            return Err(SpecialError::NonConvergence {
                func: "meijer_g",
                terms: MAX_SERIES_TERMS,
            });
        }
        let scale = ln_c + bh * x.ln();
        value = value + Scaled::new(sign * sum).mul_exp(scale);
        magnitude = magnitude + Scaled::new(sum_abs).mul_exp(scale);
    }
    Ok(ResidueSum {
        value,
        magnitude,
        overflowed: false,
    })
}

/// Residue sum, or `None` when it is too ill-conditioned to trust.
fn residues(spec: &MeijerGSpec, x: f64) -> Result<Option<Scaled>> {
    let r = residue_sum(spec, x)?;
    if r.overflowed || r.value.is_zero() {
        return Ok(None);
    }
    if r.magnitude.ratio(r.value).abs() > MAX_CANCELLATION {
        return Ok(None);
    }
    Ok(Some(r.value))
}

fn ln_phi_real(spec: &MeijerGSpec, s: f64) -> f64 {
    let (m, n) = (spec.m, spec.n);
    let mut v = 0.0;
    for (j, &bj) in spec.b.iter().enumerate() {
        v += if j < m {
            ln_gamma_signed(bj + s).0
        } else {
            -ln_gamma_signed(1.0 - bj - s).0
        };
    }
    for (j, &aj) in spec.a.iter().enumerate() {
        v += if j < n {
            ln_gamma_signed(1.0 - aj - s).0
        } else {
            -ln_gamma_signed(aj + s).0
        };
    }
    v
}

fn ln_phi(spec: &MeijerGSpec, s: Complex64) -> Complex64 {
    let (m, n) = (spec.m, spec.n);
    let one = Complex64::new(1.0, 0.0);
    let mut v = Complex64::new(0.0, 0.0);
    for (j, &bj) in spec.b.iter().enumerate() {
        if j < m {
            v += ln_gamma_complex(s + bj);
        } else {
            v -= ln_gamma_complex(one - bj - s);
        }
    }
    for (j, &aj) in spec.a.iter().enumerate() {
        if j < n {
            v += ln_gamma_complex(one - aj - s);
        } else {
            v -= ln_gamma_complex(s + aj);
        }
    }
    v
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let tol = 1e-4 * (hi - lo);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

fn contour(spec: &MeijerGSpec, x: f64) -> Result<Scaled> {
    let (p, q) = (spec.p() as f64, spec.q() as f64);
    let decay = spec.m as f64 + spec.n as f64 - 0.5 * (p + q);
    if decay <= 0.0 {
        return Err(SpecialError::UnsupportedClass(format!(
            "line integral needs m + n > (p + q)/2, got {decay}"
        )));
    }
    let left = spec.b[..spec.m]
        .iter()
        .map(|b| -b)
        .fold(f64::NEG_INFINITY, f64::max);
    let right = spec.a[..spec.n]
        .iter()
        .map(|a| 1.0 - a)
        .fold(f64::INFINITY, f64::min);
    if left >= right {
        return Err(SpecialError::UnsupportedClass(
            "no vertical line separates the pole families".into(),
        ));
    }
    let lnx = x.ln();
    let f = |c: f64| ln_phi_real(spec, c) - c * lnx;

    let (lo, hi) = if right.is_finite() && left.is_finite() {
        let w = right - left;
        (left + 0.1 * w, right - 0.1 * w)
    } else if left.is_finite() {
        // Unbounded to the right: expand until f turns upward.
        let lo = left + 0.1;
        let mut hi = left + 1.0;
        while f(hi) < f(0.5 * (lo + hi)) && hi < 1e6 {
            hi = left + 2.0 * (hi - left);
        }
        (lo, hi)
    } else {
        let hi = right - 0.1;
        let mut lo = right - 1.0;
        while f(lo) < f(0.5 * (lo + hi)) && lo > -1e6 {
            lo = right - 2.0 * (right - lo);
        }
        (lo, hi)
    };
    let c = golden_min(f, lo, hi);
    let f0 = f(c);

    let dist = (c - left).min(right - c);
    let d = (0.5 * dist).min(2.0);
    let growth = (f(c - d).max(f(c + d)) - f0).max(0.0);
    let h = (2.0 * PI * d / (growth + 45.0)).min(0.5);

    let integrand = |t: f64| {
        let s = Complex64::new(c, t);
        (ln_phi(spec, s) - s * lnx - f0).exp()
    };
    let mut sum = integrand(0.0).re;
    let mut peak = 1.0f64;
    let mut quiet = 0usize;
    let mut k = 1usize;
    loop {
        let v = integrand(k as f64 * h);
        sum += 2.0 * v.re;
        let a = v.norm();
        peak = peak.max(a);
        if a < 1e-18 * peak {
            quiet += 1;
            if quiet >= 50 {
                break;
            }
        } else {
            quiet = 0;
        }
        k += 1;
        if k > MAX_LINE_NODES {
            return Err(SpecialError::NonConvergence {
                func: "meijer_g",
                terms: MAX_LINE_NODES,
            });
        }
    }
    Ok(Scaled::new(sum * h / (2.0 * PI)).mul_exp(f0))
}

const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// A branch of `ln Γ(z)`; only `exp` of the result is used, so the branch
/// does not matter.
pub(crate) fn ln_gamma_complex(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_complex(one - z);
    }
    let mut z = z;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut shifted = false;
    while z.norm() < 15.0 {
        prod *= z;
        z += 1.0;
        shifted = true;
    }
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pw = zinv;
    for c in STIRLING {
        series += pw * c;
        pw *= zinv2;
    }
    let mut v = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series;
    if shifted {
        v -= prod.ln();
    }
    v
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    let i = Complex64::new(0.0, 1.0);
    // sin(πz) = (i/2) e^{-iπz} (1 - e^{2iπz})
    let e2 = (2.0 * PI * i * z).exp();
    Complex64::new(0.5f64.ln(), 0.5 * PI) - i * PI * z + (Complex64::new(1.0, 0.0) - e2).ln()
}
