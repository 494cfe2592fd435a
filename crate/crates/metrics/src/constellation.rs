use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use fsorf_specfun::{gaussian_q, kummer_1f1};

use crate::error::{MetricsError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hqam,
    Rqam,
    Xqam,
    Sqam,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Hqam => "hqam",
            Family::Rqam => "rqam",
            Family::Xqam => "xqam",
            Family::Sqam => "sqam",
        }
    }
}

/// Family-specific constants of the AWGN symbol-error expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SepConstants {
    Hexagonal { theta: f64, k: f64, k_c: f64 },
    Rectangular { p0: f64, q0: f64, a0: f64, b0: f64 },
    Cross { n_n: f64, a1: f64, a2: u32, a3: f64, a4: f64, m_i: u32, n_q: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationSpec {
    family: Family,
    m_total: u32,
    m_i: u32,
    n_q: u32,
    beta_r: f64,
    constants: SepConstants,
}

/// Irregular (optimum) HQAM constants `(θ, K, K_c)`.
pub fn hqam_params(m_total: u32) -> Result<(f64, f64, f64)> {
    let row = match m_total {
        4 => (1.0, 5.0 / 2.0, 3.0 / 2.0),
        8 => (32.0 / 69.0, 7.0 / 2.0, 21.0 / 8.0),
        16 => (8.0 / 35.0, 33.0 / 8.0, 27.0 / 8.0),
        32 => (512.0 / 4503.0, 75.0 / 16.0, 33.0 / 8.0),
        64 => (8.0 / 141.0, 163.0 / 32.0, 75.0 / 16.0),
        128 => (2.0 / 70.56, 343.0 / 64.0, 81.0 / 16.0),
        256 => (2.0 / 141.0, 711.0 / 128.0, 171.0 / 32.0),
        512 => (200.0 / 28217.0, 2911.0 / 512.0, 5667.0 / 1024.0),
        1024 => (100.0 / 28227.0, 2955.0 / 512.0, 1449.0 / 256.0),
        _ => {
            return Err(MetricsError::UnsupportedConstellation(format!(
                "no HQAM constants for M = {m_total}"
            )))
        }
    };
    Ok(row)
}

impl ConstellationSpec {
    pub fn hqam(m_total: u32) -> Result<Self> {
        let (theta, k, k_c) = hqam_params(m_total)?;
        Ok(ConstellationSpec {
            family: Family::Hqam,
            m_total,
            m_i: 0,
            n_q: 0,
            beta_r: 1.0,
            constants: SepConstants::Hexagonal { theta, k, k_c },
        })
    }

    /// `m_i × n_q` rectangular QAM with quadrature/in-phase distance ratio
    /// `beta_r`.
    pub fn rqam(m_i: u32, n_q: u32, beta_r: f64) -> Result<Self> {
        if m_i < 2 || n_q < 2 {
            return Err(MetricsError::UnsupportedConstellation(format!(
                "RQAM needs at least 2 levels per axis, got {m_i}x{n_q}"
            )));
        }
        if !(beta_r > 0.0 && beta_r.is_finite()) {
            return Err(MetricsError::InvalidParameter {
                name: "beta_r",
                value: beta_r,
                reason: "distance ratio must be positive",
            });
        }
        let (mi, nq) = (m_i as f64, n_q as f64);
        let a0 = (6.0 / ((mi * mi - 1.0) + (nq * nq - 1.0) * beta_r * beta_r)).sqrt();
        Ok(ConstellationSpec {
            family: Family::Rqam,
            m_total: m_i * n_q,
            m_i,
            n_q,
            beta_r,
            constants: SepConstants::Rectangular {
                p0: 1.0 - 1.0 / mi,
                q0: 1.0 - 1.0 / nq,
                a0,
                b0: beta_r * a0,
            },
        })
    }

    /// Square QAM, i.e. `√M × √M` RQAM with equal distances.
    pub fn sqam(m_total: u32) -> Result<Self> {
        let side = (m_total as f64).sqrt().round() as u32;
        if side * side != m_total || side < 2 {
            return Err(MetricsError::UnsupportedConstellation(format!(
                "SQAM needs a square order, got {m_total}"
            )));
        }
        let mut c = Self::rqam(side, side, 1.0)?;
        c.family = Family::Sqam;
        Ok(c)
    }

    /// Cross QAM for odd powers of two with `M_i = 2N_q`.
    pub fn xqam(m_total: u32) -> Result<Self> {
        let n_q = ((m_total / 2) as f64).sqrt().round() as u32;
        let m_i = 2 * n_q;
        if m_i * n_q != m_total || n_q < 2 {
            return Err(MetricsError::UnsupportedConstellation(format!(
                "XQAM needs M = 2N_q², got {m_total}"
            )));
        }
        let a2 = (m_i - n_q) / 2;
        if a2 % 2 != 0 || (m_i - n_q) % 2 != 0 {
            return Err(MetricsError::UnsupportedConstellation(format!(
                "XQAM M = {m_total} has odd a2 = (M_i - N_q)/2"
            )));
        }
        let mn = (m_i * n_q) as f64;
        let (mi, nq) = (m_i as f64, n_q as f64);
        Ok(ConstellationSpec {
            family: Family::Xqam,
            m_total,
            m_i,
            n_q,
            beta_r: 1.0,
            constants: SepConstants::Cross {
                n_n: 4.0 - 2.0 * (mi + nq) / mn,
                a1: 2.0 / 3.0 * (31.0 * mn / 32.0 - 1.0),
                a2,
                a3: 4.0 - 4.0 * (mi + nq) / mn + 8.0 / mn,
                a4: (mi - nq) / mn,
                m_i,
                n_q,
            },
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn m_total(&self) -> u32 {
        self.m_total
    }
    pub fn m_i(&self) -> u32 {
        self.m_i
    }
    pub fn n_q(&self) -> u32 {
        self.n_q
    }
    pub fn beta_r(&self) -> f64 {
        self.beta_r
    }
    pub fn constants(&self) -> SepConstants {
        self.constants
    }

    /// Terms of `dP_s/dγ`.
    pub fn derivative_terms(&self) -> Vec<DerivTerm> {
        derivative_terms(&self.constants)
    }
}

impl fmt::Display for ConstellationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Rqam => write!(
                f,
                "rqam:{}:{}x{}:{}",
                self.m_total, self.m_i, self.n_q, self.beta_r
            ),
            fam => write!(f, "{}:{}", fam.as_str(), self.m_total),
        }
    }
}

/// Parses `family:M[:MixNq[:betaR]]`, e.g. `hqam:16`, `rqam:8:4x2:1`.
impl FromStr for ConstellationSpec {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || MetricsError::UnsupportedConstellation(format!("cannot parse {s:?}"));
        let mut parts = s.split(':');
        let family = parts.next().ok_or_else(bad)?.trim().to_ascii_lowercase();
        let m: u32 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let dims = parts.next();
        let beta_r: f64 = match parts.next() {
            Some(b) => b.trim().parse().map_err(|_| bad())?,
            None => 1.0,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        match family.as_str() {
            "hqam" => Self::hqam(m),
            "sqam" => Self::sqam(m),
            "xqam" => Self::xqam(m),
            "rqam" => {
                let (mi, nq) = match dims {
                    Some(d) => {
                        let (a, b) = d.split_once(['x', 'X']).ok_or_else(bad)?;
                        (
                            a.trim().parse::<u32>().map_err(|_| bad())?,
                            b.trim().parse::<u32>().map_err(|_| bad())?,
                        )
                    }
                    None => default_rect(m).ok_or_else(bad)?,
                };
                if mi * nq != m {
                    return Err(MetricsError::UnsupportedConstellation(format!(
                        "{mi}x{nq} does not have {m} points"
                    )));
                }
                Self::rqam(mi, nq, beta_r)
            }
            _ => Err(bad()),
        }
    }
}

/// Most square factorization `M_i × N_q` of a power of two, `M_i ≥ N_q`.
fn default_rect(m: u32) -> Option<(u32, u32)> {
    if !m.is_power_of_two() || m < 4 {
        return None;
    }
    let bits = m.trailing_zeros();
    let nq = 1 << (bits / 2);
    Some((m / nq, nq))
}

/// AWGN conditional symbol-error probability at SNR `gamma`.
pub fn conditional_sep(c: &ConstellationSpec, gamma: f64) -> f64 {
    let q = gaussian_q;
    let g = gamma.max(0.0);
    match c.constants {
        SepConstants::Hexagonal { theta, k, k_c } => {
            let q1 = q((theta * g).sqrt());
            k * q1 + 2.0 / 3.0 * k_c * q((2.0 * theta * g / 3.0).sqrt()).powi(2)
                - 2.0 * k_c * q1 * q((theta * g / 3.0).sqrt())
        }
        SepConstants::Rectangular { p0, q0, a0, b0 } => {
            let qa = q(a0 * g.sqrt());
            let qb = q(b0 * g.sqrt());
            2.0 * (p0 * qa * (1.0 - 2.0 * q0 * qb) + q0 * qb)
        }
        SepConstants::Cross { n_n, a1, a2, a3, m_i, n_q, .. } => {
            let u = (2.0 * g / a1).sqrt();
            let qu = q(u);
            let qa2 = q(a2 as f64 * u);
            let mut inner = qa2 - qu * qa2;
            for l in 1..a2 / 2 {
                let ql = q(2.0 * l as f64 * u);
                inner += ql - 2.0 * qu * ql;
            }
            n_n * qu + 8.0 / (m_i * n_q) as f64 * inner - a3 * qu * qu
        }
    }
}

/// One term of the SEP derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivTerm {
    /// `coef · γ^{-1/2} e^{-ψγ}`
    Power { coef: f64, psi: f64 },
    /// `coef · e^{-ψγ} ₁F₁(1; 3/2; κγ)`
    Kummer { coef: f64, psi: f64, kappa: f64 },
}

impl DerivTerm {
    pub fn eval(&self, gamma: f64) -> f64 {
        match *self {
            DerivTerm::Power { coef, psi } => coef * (-psi * gamma).exp() / gamma.sqrt(),
            DerivTerm::Kummer { coef, psi, kappa } => {
                coef * (-psi * gamma).exp()
                    * kummer_1f1(1.0, 1.5, kappa * gamma).expect("1F1(1;3/2;x) converges")
            }
        }
    }
}

fn derivative_terms(c: &SepConstants) -> Vec<DerivTerm> {
    use DerivTerm::{Kummer, Power};
    match *c {
        SepConstants::Hexagonal { theta, k, k_c } => {
            let kum = -k_c * theta / (2.0 * 3f64.sqrt() * PI);
            vec![
                Power { coef: 0.5 * (theta / (2.0 * PI)).sqrt() * (k_c - k), psi: theta / 2.0 },
                Power { coef: -k_c / 3.0 * (theta / (3.0 * PI)).sqrt(), psi: theta / 3.0 },
                Power { coef: k_c / 2.0 * (theta / (6.0 * PI)).sqrt(), psi: theta / 6.0 },
                Kummer { coef: 2.0 * k_c * theta / (9.0 * PI), psi: 2.0 * theta / 3.0, kappa: theta / 3.0 },
                Kummer { coef: kum, psi: 2.0 * theta / 3.0, kappa: theta / 2.0 },
                Kummer { coef: kum, psi: 2.0 * theta / 3.0, kappa: theta / 6.0 },
            ]
        }
        SepConstants::Rectangular { p0, q0, a0, b0 } => {
            let s2pi = (2.0 * PI).sqrt();
            let (ha, hb) = (a0 * a0 / 2.0, b0 * b0 / 2.0);
            let kum = -a0 * b0 * p0 * q0 / PI;
            vec![
                Power { coef: a0 * p0 * (q0 - 1.0) / s2pi, psi: ha },
                Power { coef: b0 * (p0 - 1.0) * q0 / s2pi, psi: hb },
                Kummer { coef: kum, psi: ha + hb, kappa: ha },
                Kummer { coef: kum, psi: ha + hb, kappa: hb },
            ]
        }
        SepConstants::Cross { n_n, a1, a2, a3, a4, m_i, n_q } => {
            let mn = (m_i * n_q) as f64;
            let a2f = a2 as f64;
            let root = (PI * a1).sqrt();
            let mut v = vec![
                Power {
                    coef: (-n_n + 4.0 * (a2f - 1.0) / mn + a3) / (2.0 * root),
                    psi: 1.0 / a1,
                },
                Power { coef: -a4 / root, psi: a2f * a2f / a1 },
            ];
            for l in 1..a2 / 2 {
                let l2 = 4.0 * (l * l) as f64;
                let coef = -16.0 / mn * l as f64 / (PI * a1);
                let psi = (l2 + 1.0) / a1;
                v.push(Kummer { coef, psi, kappa: 1.0 / a1 });
                v.push(Kummer { coef, psi, kappa: l2 / a1 });
            }
            let coef = -2.0 * a4 / (PI * a1);
            let psi = (1.0 + a2f * a2f) / a1;
            v.push(Kummer { coef, psi, kappa: 1.0 / a1 });
            v.push(Kummer { coef, psi, kappa: a2f * a2f / a1 });
            v.push(Kummer { coef: -a3 / (PI * a1), psi: 2.0 / a1, kappa: 1.0 / a1 });
            v
        }
    }
}

/// `dP_s/dγ` from the closed-form derivative terms.
pub fn conditional_sep_derivative(c: &ConstellationSpec, gamma: f64) -> f64 {
    c.derivative_terms().iter().map(|t| t.eval(gamma)).sum()
}
