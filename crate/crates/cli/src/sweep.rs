use std::fmt;
use std::io::Write;
use std::str::FromStr;

use fsorf_metrics::{
    aser_converged, asymptotic_outage, effective_capacity, ergodic_capacity, outage, ConstellationSpec,
    MetricsError,
};
use fsorf_montecarlo::{
    default_workers, simulate_aser, simulate_capacity, simulate_outage, CapacityKind, SimConfig,
    MIN_RELIABLE_SAMPLES,
};
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::config::{ConfigFile, Resolved};
use crate::preset;

pub const CSV_HEADER: [&str; 7] = [
    "metric",
    "ptx_dbm",
    "analytic_value",
    "mc_value",
    "mc_std_error",
    "n_samples",
    "seed",
];

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{0}")]
    Request(String),
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error("{metric} at {ptx_dbm} dBm: {source}")]
    Numeric {
        metric: String,
        ptx_dbm: f64,
        source: MetricsError,
    },
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing CSV: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Outage,
    AsymOutage,
    Ergodic,
    Effective,
    Aser,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::AsymOutage => "asym_outage",
            Metric::Ergodic => "ergodic",
            Metric::Effective => "effective",
            Metric::Aser => "aser",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "outage" => Metric::Outage,
            "asym_outage" => Metric::AsymOutage,
            "ergodic" => Metric::Ergodic,
            "effective" => Metric::Effective,
            "aser" => Metric::Aser,
            _ => return Err(format!("unknown metric {s:?} (outage, asym_outage, ergodic, effective, aser)")),
        })
    }
}

/// Inclusive power grid `start:stop:step`; a bare number is a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {t:?} in power grid {s:?}"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let g = match parts.as_slice() {
            [x] => {
                let x = num(x)?;
                Grid { start: x, stop: x, step: 1.0 }
            }
            [a, b, c] => Grid {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            },
            _ => return Err(format!("power grid {s:?} is not start:stop:step")),
        };
        if g.start > g.stop {
            return Err(format!("power grid {s:?} has start > stop"));
        }
        if g.step <= 0.0 {
            return Err(format!("power grid {s:?} needs a positive step"));
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, Default)]
pub struct SweepRequest {
    pub metric: Option<Metric>,
    pub ptx_dbm: Option<Grid>,
    pub preset: Option<String>,
    pub constellation: Option<ConstellationSpec>,
    pub theta: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub compare: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McColumns {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub metric: String,
    pub ptx_dbm: f64,
    pub analytic_value: f64,
    pub mc: Option<McColumns>,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
struct Job {
    label: String,
    metric: Metric,
    ptx_dbm: f64,
    theta: Option<f64>,
    constellation: Option<ConstellationSpec>,
    config: Resolved,
}

fn parse_constellation(s: &str) -> Result<ConstellationSpec, SweepError> {
    s.parse().map_err(|e: MetricsError| SweepError::Request(e.to_string()))
}

fn plan(req: &SweepRequest, base: &Resolved) -> Result<Vec<Job>, SweepError> {
    let mut base = base.clone();
    if let Some(n) = req.samples {
        base.sim.samples = n;
    }
    if let Some(s) = req.seed {
        base.sim.seed = s;
    }
    let mut jobs = Vec::new();
    let Some(name) = &req.preset else {
        let metric = req
            .metric
            .ok_or_else(|| SweepError::Request("either --metric or --preset is required".into()))?;
        let grid = req
            .ptx_dbm
            .ok_or_else(|| SweepError::Request("--ptx-dbm is required without a preset".into()))?;
        base.check()?;
        let label = match metric {
            Metric::Aser => {
                let c = req
                    .constellation
                    .as_ref()
                    .ok_or_else(|| SweepError::Request("metric aser needs --constellation".into()))?;
                format!("aser[{c}]")
            }
            Metric::Effective => {
                let t = req
                    .theta
                    .ok_or_else(|| SweepError::Request("metric effective needs --theta".into()))?;
                format!("effective[theta={t}]")
            }
            m => m.as_str().to_string(),
        };
        for p in grid.points() {
            jobs.push(Job {
                label: label.clone(),
                metric,
                ptx_dbm: p,
                theta: req.theta,
                constellation: req.constellation.clone(),
                config: base.clone(),
            });
        }
        return Ok(jobs);
    };

    let p = preset::load(name).map_err(SweepError::Request)?;
    if req.metric.is_some_and(|m| m != p.metric) {
        return Err(SweepError::Request(format!(
            "preset {name} sweeps {}; drop --metric or pick another preset",
            p.metric
        )));
    }
    let grid = match req.ptx_dbm {
        Some(g) => g,
        None => p.ptx_dbm.parse().map_err(SweepError::Request)?,
    };
    let preset_base = p.base.apply(&base);
    let thetas: Vec<Option<f64>> = match (&p.thetas, req.theta.or(p.theta)) {
        (_, Some(t)) => vec![Some(t)],
        (Some(ts), None) => ts.iter().copied().map(Some).collect(),
        (None, None) => vec![None],
    };
    for c in &p.curve {
        let config = c.overrides().apply(&preset_base);
        config.check()?;
        let metric = c.metric.unwrap_or(p.metric);
        let constellation = match (&req.constellation, &c.constellation, &p.constellation) {
            (Some(r), _, _) => Some(r.clone()),
            (None, Some(s), _) | (None, None, Some(s)) => Some(parse_constellation(s)?),
            _ => None,
        };
        if metric == Metric::Aser && constellation.is_none() {
            return Err(SweepError::Request(format!("preset {name} curve {} has no constellation", c.label)));
        }
        for &theta in &thetas {
            if metric == Metric::Effective && theta.is_none() {
                return Err(SweepError::Request(format!("preset {name} has no delay exponent; pass --theta")));
            }
            let label = match theta {
                Some(t) if metric == Metric::Effective => format!("{metric}[{} theta={t}]", c.label),
                _ => format!("{metric}[{}]", c.label),
            };
            for x in grid.points() {
                jobs.push(Job {
                    label: label.clone(),
                    metric,
                    ptx_dbm: x,
                    theta,
                    constellation: constellation.clone(),
                    config: config.clone(),
                });
            }
        }
    }
    Ok(jobs)
}

fn evaluate(job: &Job, compare: bool) -> Result<(SweepRow, Option<String>), SweepError> {
    let numeric = |source: MetricsError| SweepError::Numeric {
        metric: job.label.clone(),
        ptx_dbm: job.ptx_dbm,
        source,
    };
    let system = job.config.system(job.ptx_dbm).map_err(numeric)?;
    let sim = &job.config.sim;
    let cfg = SimConfig {
        effective_mode: sim.effective_mode,
        aser_snr: sim.aser_snr,
        ..SimConfig::new(system.clone(), sim.samples, sim.seed).with_workers(1)
    };
    let mut warning = None;
    let (analytic, mc) = match job.metric {
        Metric::Outage => (outage(&system), compare.then(|| simulate_outage(&cfg))),
        // no simulation counterpart for a high-SNR approximation
        Metric::AsymOutage => (asymptotic_outage(&system), None),
        Metric::Ergodic => (
            ergodic_capacity(&system),
            compare.then(|| simulate_capacity(&cfg, CapacityKind::Ergodic)),
        ),
        Metric::Effective => {
            let theta = job.theta.expect("planned with a delay exponent");
            let ec = effective_capacity(&system, theta).map_err(numeric)?;
            warning = ec.warning().map(|w| format!("{} at {} dBm: {w}", job.label, job.ptx_dbm));
            (
                Ok(ec.value),
                compare.then(|| simulate_capacity(&cfg, CapacityKind::Effective(theta))),
            )
        }
        Metric::Aser => {
            let c = job.constellation.as_ref().expect("planned with a constellation");
            let v = aser_converged(c, &system, job.config.series_policy(), sim.max_z1_terms).map(|e| e.value);
            (v, compare.then(|| simulate_aser(&cfg, c)))
        }
    };
    let row = SweepRow {
        metric: job.label.clone(),
        ptx_dbm: job.ptx_dbm,
        analytic_value: analytic.map_err(numeric)?,
        mc: mc.map(|e| McColumns {
            value: e.value,
            std_error: e.std_error,
            n_samples: e.n,
            seed: sim.seed,
        }),
    };
    Ok((row, warning))
}

/// Runs every grid point of `req` on top of `base`. Points are spread over
/// a worker pool; rows come back in grid order.
pub fn run_sweep(req: &SweepRequest, base: &Resolved) -> Result<SweepOutput, SweepError> {
    let jobs = plan(req, base)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(default_workers())
        .build()
        .map_err(|e| SweepError::Request(e.to_string()))?;
    let results: Vec<_> = pool.install(|| jobs.par_iter().map(|j| evaluate(j, req.compare)).collect());
    let mut out = SweepOutput::default();
    if req.compare {
        let n = jobs.first().map_or(0, |j| j.config.sim.samples);
        if n < MIN_RELIABLE_SAMPLES {
            out.warnings.push(format!(
                "{n} samples is below {MIN_RELIABLE_SAMPLES}; standard errors are unreliable"
            ));
        }
    }
    for r in results {
        let (row, w) = r?;
        out.rows.push(row);
        out.warnings.extend(w);
    }
    Ok(out)
}

/// Convenience wrapper: parses an optional config source, then sweeps.
pub fn run_sweep_with_config(req: &SweepRequest, config_src: Option<&str>) -> Result<SweepOutput, SweepError> {
    let base = match config_src {
        Some(src) => {
            let file = ConfigFile::parse(src)?;
            let r = file.apply(&Resolved::default());
            r.check().map_err(|e| e.located(src))?;
            r
        }
        None => Resolved::default(),
    };
    run_sweep(req, &base)
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let (v, se, n, seed) = match &r.mc {
            Some(m) => (float(m.value), float(m.std_error), m.n_samples.to_string(), m.seed.to_string()),
            None => Default::default(),
        };
        w.write_record([r.metric.clone(), float(r.ptx_dbm), float(r.analytic_value), v, se, n, seed])?;
    }
    w.flush()?;
    Ok(())
}
