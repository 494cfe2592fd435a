//! Adaptive Gauss–Kronrod quadrature (7/15-point rule, global bisection).

use crate::error::{Result, SpecialError};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Split point between the finite head and the mapped tail.
    pub knee: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            knee: 1.0,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions {
            abs_tol: tol,
            rel_tol: tol,
            ..Default::default()
        }
    }

    pub fn relative(rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol: 0.0,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn knee(mut self, knee: f64) -> Self {
        self.knee = knee;
        self
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(SpecialError::NonFiniteIntegrand(c));
    }
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx), f(c + dx));
        if !f1.is_finite() {
            return Err(SpecialError::NonFiniteIntegrand(c - dx));
        }
        if !f2.is_finite() {
            return Err(SpecialError::NonFiniteIntegrand(c + dx));
        }
        k += WGK[i] * (f1 + f2);
        if i % 2 == 1 {
            g += WG[i / 2] * (f1 + f2);
        }
    }
    Ok(Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    })
}

/// `∫_a^b f` to within `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut segs = vec![kronrod(&f, a, b)?];
    loop {
        let total: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = segs
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                let mid = 0.5 * (s.a + s.b);
                mid > s.a.min(s.b) && mid < s.a.max(s.b)
            })
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i);
        let i = match worst {
            Some(i) if segs.len() < opts.max_intervals => i,
            _ => {
                return Err(SpecialError::QuadratureBudget {
                    estimate: err,
                    intervals: segs.len(),
                })
            }
        };
        let s = segs.swap_remove(i);
        let mid = 0.5 * (s.a + s.b);
        segs.push(kronrod(&f, s.a, mid)?);
        segs.push(kronrod(&f, mid, s.b)?);
    }
}

/// `∫_0^∞ f` with the default knee at 1.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    integrate_semi_infinite_with(f, &QuadOptions::with_tol(tol))
}

/// `∫_0^∞ f`: adaptive on `[0, knee]`, then `x = knee/(1-t)` on the tail.
pub fn integrate_semi_infinite_with<F: Fn(f64) -> f64>(f: F, opts: &QuadOptions) -> Result<f64> {
    let knee = opts.knee;
    if !(knee > 0.0 && knee.is_finite()) {
        return Err(SpecialError::Domain {
            func: "integrate_semi_infinite",
            detail: format!("knee = {knee} must be positive"),
        });
    }
    let half = QuadOptions {
        abs_tol: 0.5 * opts.abs_tol,
        ..*opts
    };
    let head = integrate(&f, 0.0, knee, &half)?;
    let tail = integrate(
        |t: f64| {
            let s = 1.0 - t;
            let x = knee / s;
            if x.is_infinite() {
                0.0
            } else {
                f(x) * knee / (s * s)
            }
        },
        0.0,
        1.0,
        &half,
    )?;
    Ok(head + tail)
}
