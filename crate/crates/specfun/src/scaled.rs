//! Extended-range reals.

use std::f64::consts::LN_2;
use std::ops::{Add, Mul, Neg, Sub};

const RENORM_HI: f64 = 1e150;
const RENORM_LO: f64 = 1e-150;

/// A real number held as `mantissa * exp(ln_scale)`.
///
/// Series kernels multiply factors like `Γ(400)` by `ψ^{-400}`; each factor
/// alone leaves the f64 range while the product does not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mantissa: f64,
    ln_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mantissa: 0.0,
        ln_scale: 0.0,
    };

    pub fn new(value: f64) -> Self {
        Self::normalized(value, 0.0)
    }

    /// `sign * exp(ln_abs)`.
    pub fn from_ln(sign: f64, ln_abs: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Scaled {
            mantissa: sign.signum(),
            ln_scale: ln_abs,
        }
    }

    fn normalized(mantissa: f64, ln_scale: f64) -> Self {
        if mantissa == 0.0 {
            return Self::ZERO;
        }
        let a = mantissa.abs();
        if (RENORM_LO..=RENORM_HI).contains(&a) || !a.is_finite() {
            return Scaled { mantissa, ln_scale };
        }
        let e = a.log2().floor() as i32;
        Scaled {
            mantissa: mantissa * 2f64.powi(-e),
            ln_scale: ln_scale + e as f64 * LN_2,
        }
    }

    pub fn value(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa * self.ln_scale.exp()
        }
    }

    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.ln_scale
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.mantissa.is_finite() && self.ln_scale.is_finite()
    }

    pub fn abs(self) -> Self {
        Scaled {
            mantissa: self.mantissa.abs(),
            ln_scale: self.ln_scale,
        }
    }

    /// Multiplies by `exp(ln_factor)`.
    pub fn mul_exp(self, ln_factor: f64) -> Self {
        if self.is_zero() {
            return self;
        }
        Scaled {
            mantissa: self.mantissa,
            ln_scale: self.ln_scale + ln_factor,
        }
    }

    /// Ratio `|self| / |other|` as a plain f64 (may under/overflow).
    pub fn ratio(self, other: Scaled) -> f64 {
        (self.mantissa / other.mantissa) * (self.ln_scale - other.ln_scale).exp()
    }
}

impl From<f64> for Scaled {
    fn from(v: f64) -> Self {
        Scaled::new(v)
    }
}

impl Add for Scaled {
    type Output = Scaled;
    fn add(self, o: Scaled) -> Scaled {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.ln_scale >= o.ln_scale {
            (self, o)
        } else {
            (o, self)
        };
        let m = hi.mantissa + lo.mantissa * (lo.ln_scale - hi.ln_scale).exp();
        Scaled::normalized(m, hi.ln_scale)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mantissa: -self.mantissa,
            ln_scale: self.ln_scale,
        }
    }
}

impl Sub for Scaled {
    type Output = Scaled;
    fn sub(self, o: Scaled) -> Scaled {
        self + (-o)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, o: Scaled) -> Scaled {
        Scaled::normalized(self.mantissa * o.mantissa, self.ln_scale + o.ln_scale)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, o: f64) -> Scaled {
        Scaled::normalized(self.mantissa * o, self.ln_scale)
    }
}

impl std::iter::Sum for Scaled {
    fn sum<I: Iterator<Item = Scaled>>(iter: I) -> Scaled {
        iter.fold(Scaled::ZERO, |acc, x| acc + x)
    }
}
