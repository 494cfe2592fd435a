use std::fmt;
use std::path::Path;

use fsorf_channel::{ChannelError, Detector, FsoChannelSpec, RfNetworkSpec};
use fsorf_link::{db_to_linear, FsoBudget, GainModel, RfBudget};
use fsorf_metrics::{SeriesPolicy, SystemSpec};
use fsorf_montecarlo::{AserSnr, EffectiveMode};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{key} = {value} out of range ({reason}){}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Range {
        key: String,
        value: f64,
        reason: String,
        line: Option<usize>,
    },
}

/// Raw config file. Every key is optional; omitted keys keep the default
/// link budget and channel.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub fso: FsoSection,
    #[serde(default)]
    pub rf: RfSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default)]
    pub sim: SimSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsoSection {
    pub p_s_dbm: Option<f64>,
    pub d_s: Option<f64>,
    pub d_r: Option<f64>,
    pub lambda_f: Option<f64>,
    pub a_atm_db: Option<f64>,
    pub a_fs_db: Option<f64>,
    pub l_lenses_db: Option<f64>,
    pub m_s_db: Option<f64>,
    pub b_o: Option<f64>,
    pub temp_k: Option<f64>,
    pub eta: Option<f64>,
    pub gain_model: Option<GainModelName>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub xi: Option<f64>,
    pub detector: Option<DetectorName>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfSection {
    pub p_r_dbm: Option<f64>,
    pub f_rf: Option<f64>,
    pub alpha_t: Option<f64>,
    pub h_km: Option<f64>,
    pub r_n_m: Option<f64>,
    pub b_r: Option<f64>,
    pub temp_k: Option<f64>,
    pub user_distance_m: Option<f64>,
    pub omega: Option<f64>,
    pub m: Option<f64>,
    pub n_t: Option<u32>,
    pub n_users: Option<u32>,
    pub rho: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSection {
    pub delta_th_db: Option<f64>,
    pub gamma_th_db: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub effective_mode: Option<EffectiveModeName>,
    pub aser_snr: Option<AserSnrName>,
    pub z1_terms: Option<u32>,
    pub max_z1_terms: Option<u32>,
    pub expert_im_dd: Option<bool>,
    pub power_sweep: Option<PowerSweep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorName {
    Heterodyne,
    ImDd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GainModelName {
    Paper,
    Aperture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectiveModeName {
    Paper,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AserSnrName {
    WeakerHop,
    Gated,
}

/// Which transmitters follow the swept power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerSweep {
    #[default]
    Joint,
    Fso,
    Rf,
}

impl PowerSweep {
    fn as_str(self) -> &'static str {
        match self {
            PowerSweep::Joint => "joint",
            PowerSweep::Fso => "fso",
            PowerSweep::Rf => "rf",
        }
    }
}

/// Channel parameters not covered by the link budgets.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub detector: Detector,
    pub m: f64,
    pub n_t: u32,
    pub n_users: u32,
    pub rho: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        ChannelParams {
            alpha: 2.902,
            beta: 2.51,
            xi: 6.7,
            detector: Detector::Heterodyne,
            m: 1.0,
            n_t: 1,
            n_users: 2,
            rho: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub samples: u64,
    pub seed: u64,
    pub effective_mode: EffectiveMode,
    pub aser_snr: AserSnr,
    pub z1_terms: u32,
    pub max_z1_terms: u32,
    pub expert_im_dd: bool,
    pub power_sweep: PowerSweep,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings {
            samples: 1_000_000,
            seed: 1,
            effective_mode: EffectiveMode::Paper,
            aser_snr: AserSnr::WeakerHop,
            z1_terms: SeriesPolicy::default().z1_terms,
            max_z1_terms: 1 << 14,
            expert_im_dd: false,
            power_sweep: PowerSweep::Joint,
        }
    }
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub fso_budget: FsoBudget,
    pub rf_budget: RfBudget,
    pub channel: ChannelParams,
    pub delta_th_db: f64,
    pub gamma_th_db: f64,
    pub sim: SimSettings,
}

impl Default for Resolved {
    fn default() -> Self {
        Resolved {
            fso_budget: FsoBudget::default(),
            rf_budget: RfBudget::default(),
            channel: ChannelParams::default(),
            delta_th_db: 5.0,
            gamma_th_db: 5.0,
            sim: SimSettings::default(),
        }
    }
}

impl ConfigFile {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        toml::from_str(src).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok((Self::parse(&src)?, src))
    }

    /// Applies the keys present in this file on top of `base`.
    pub fn apply(&self, base: &Resolved) -> Resolved {
        let mut r = base.clone();
        let f = &self.fso;
        let b = &mut r.fso_budget;
        set(&mut b.p_s_dbm, f.p_s_dbm);
        set(&mut b.d_s, f.d_s);
        set(&mut b.d_r, f.d_r);
        set(&mut b.lambda_f, f.lambda_f);
        set(&mut b.a_atm_db, f.a_atm_db);
        set(&mut b.a_fs_db, f.a_fs_db);
        set(&mut b.l_lenses_db, f.l_lenses_db);
        set(&mut b.m_s_db, f.m_s_db);
        set(&mut b.b_o, f.b_o);
        set(&mut b.temp_k, f.temp_k);
        set(&mut b.eta, f.eta);
        if let Some(g) = f.gain_model {
            b.gain_model = match g {
                GainModelName::Paper => GainModel::Paper,
                GainModelName::Aperture => GainModel::Aperture,
            };
        }
        let c = &mut r.channel;
        set(&mut c.alpha, f.alpha);
        set(&mut c.beta, f.beta);
        set(&mut c.xi, f.xi);
        if let Some(d) = f.detector {
            c.detector = match d {
                DetectorName::Heterodyne => Detector::Heterodyne,
                DetectorName::ImDd => Detector::ImDd,
            };
        }

        let f = &self.rf;
        let b = &mut r.rf_budget;
        set(&mut b.p_r_dbm, f.p_r_dbm);
        set(&mut b.f_rf, f.f_rf);
        set(&mut b.alpha_t, f.alpha_t);
        set(&mut b.h_km, f.h_km);
        set(&mut b.r_n_m, f.r_n_m);
        set(&mut b.b_r, f.b_r);
        set(&mut b.temp_k, f.temp_k);
        set(&mut b.omega, f.omega);
        if f.user_distance_m.is_some() {
            b.user_distance_m = f.user_distance_m;
        }
        set(&mut c.m, f.m);
        set(&mut c.n_t, f.n_t);
        set(&mut c.n_users, f.n_users);
        set(&mut c.rho, f.rho);

        set(&mut r.delta_th_db, self.thresholds.delta_th_db);
        set(&mut r.gamma_th_db, self.thresholds.gamma_th_db);

        let s = &self.sim;
        let o = &mut r.sim;
        set(&mut o.samples, s.samples);
        set(&mut o.seed, s.seed);
        set(&mut o.z1_terms, s.z1_terms);
        set(&mut o.max_z1_terms, s.max_z1_terms);
        set(&mut o.expert_im_dd, s.expert_im_dd);
        set(&mut o.power_sweep, s.power_sweep);
        if let Some(m) = s.effective_mode {
            o.effective_mode = match m {
                EffectiveModeName::Paper => EffectiveMode::Paper,
                EffectiveModeName::Strict => EffectiveMode::Strict,
            };
        }
        if let Some(a) = s.aser_snr {
            o.aser_snr = match a {
                AserSnrName::WeakerHop => AserSnr::WeakerHop,
                AserSnrName::Gated => AserSnr::Gated,
            };
        }
        r
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Resolved {
    /// Every range violation, at most one per budget.
    pub fn violations(&self) -> Vec<ConfigError> {
        let mut out = Vec::new();
        for r in [self.fso_budget.validate(), self.rf_budget.validate()] {
            if let Err(e) = r {
                out.push(budget_error(&e));
            }
        }
        let c = &self.channel;
        if let Err(e) = FsoChannelSpec::new(c.alpha, c.beta, c.xi, c.detector, 1.0) {
            out.push(channel_error(&e, "fso"));
        }
        if let Err(e) = RfNetworkSpec::new(c.m, c.n_t, c.n_users, c.rho, 1.0) {
            out.push(channel_error(&e, "rf"));
        }
        for (key, v) in [
            ("thresholds.delta_th_db", self.delta_th_db),
            ("thresholds.gamma_th_db", self.gamma_th_db),
        ] {
            if !v.is_finite() {
                out.push(range(key, v, "must be finite"));
            }
        }
        let s = &self.sim;
        if s.samples == 0 {
            out.push(range("sim.samples", 0.0, "need at least one sample"));
        }
        if s.z1_terms < 2 {
            out.push(range("sim.z1_terms", s.z1_terms as f64, "need at least two terms"));
        }
        if s.max_z1_terms < s.z1_terms {
            out.push(range("sim.max_z1_terms", s.max_z1_terms as f64, "must be at least z1_terms"));
        }
        out
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        match self.violations().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// System at transmit power `ptx_dbm` under the configured power sweep.
    pub fn system(&self, ptx_dbm: f64) -> fsorf_metrics::Result<SystemSpec> {
        let c = &self.channel;
        let fso = FsoChannelSpec::new(c.alpha, c.beta, c.xi, c.detector, 1.0)?;
        let rf = RfNetworkSpec::new(c.m, c.n_t, c.n_users, c.rho, 1.0)?;
        let base = SystemSpec::new(fso, rf, db_to_linear(self.delta_th_db), db_to_linear(self.gamma_th_db))?;
        let (fb, rb) = match self.sim.power_sweep {
            PowerSweep::Joint => (self.fso_budget.with_power_dbm(ptx_dbm), self.rf_budget.with_power_dbm(ptx_dbm)),
            PowerSweep::Fso => (self.fso_budget.with_power_dbm(ptx_dbm), self.rf_budget.clone()),
            PowerSweep::Rf => (self.fso_budget.clone(), self.rf_budget.with_power_dbm(ptx_dbm)),
        };
        base.with_budgets(&fb, &rb)
    }

    pub fn series_policy(&self) -> SeriesPolicy {
        SeriesPolicy {
            z1_terms: self.sim.z1_terms,
            expert_im_dd: self.sim.expert_im_dd,
        }
    }
}

fn range(key: &str, value: f64, reason: &str) -> ConfigError {
    ConfigError::Range {
        key: key.to_string(),
        value,
        reason: reason.to_string(),
        line: None,
    }
}

fn budget_error(e: &fsorf_link::BudgetError) -> ConfigError {
    match e {
        fsorf_link::BudgetError::OutOfRange { name, value, reason } => range(name, *value, reason),
        other => ConfigError::Parse(other.to_string()),
    }
}

fn channel_error(e: &ChannelError, section: &str) -> ConfigError {
    match e {
        ChannelError::InvalidParameter { name, value, reason } => range(&format!("{section}.{name}"), *value, reason),
        other => ConfigError::Parse(other.to_string()),
    }
}

impl ConfigError {
    /// Fills in the line of a range violation from the source it came from.
    pub fn located(self, src: &str) -> Self {
        match self {
            ConfigError::Range { key, value, reason, line: None } => {
                let line = locate_key(src, &key);
                ConfigError::Range { key, value, reason, line }
            }
            other => other,
        }
    }
}

/// 1-based line of `section.key` in a config source, accepting both
/// `[section]` tables and dotted keys.
pub fn locate_key(src: &str, dotted: &str) -> Option<usize> {
    let (section, key) = dotted.split_once('.')?;
    let mut current = String::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else { continue };
        let lhs: String = lhs.chars().filter(|c| !c.is_whitespace()).collect();
        if (current == section && lhs == key) || (current.is_empty() && lhs == dotted) {
            return Some(i + 1);
        }
    }
    None
}

impl fmt::Display for Resolved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.fso_budget;
        let c = &self.channel;
        writeln!(f, "[fso]")?;
        writeln!(f, "p_s_dbm = {}", b.p_s_dbm)?;
        writeln!(f, "d_s = {}", b.d_s)?;
        writeln!(f, "d_r = {}", b.d_r)?;
        writeln!(f, "lambda_f = {:e}", b.lambda_f)?;
        writeln!(f, "a_atm_db = {}", b.a_atm_db)?;
        writeln!(f, "a_fs_db = {}", b.a_fs_db)?;
        writeln!(f, "l_lenses_db = {}", b.l_lenses_db)?;
        writeln!(f, "m_s_db = {}", b.m_s_db)?;
        writeln!(f, "b_o = {:e}", b.b_o)?;
        writeln!(f, "temp_k = {}", b.temp_k)?;
        writeln!(f, "eta = {}", b.eta)?;
        writeln!(f, "gain_model = \"{}\"", b.gain_model.as_str())?;
        writeln!(f, "alpha = {}", c.alpha)?;
        writeln!(f, "beta = {}", c.beta)?;
        writeln!(f, "xi = {}", c.xi)?;
        let det = match c.detector {
            Detector::Heterodyne => "heterodyne",
            Detector::ImDd => "im_dd",
        };
        writeln!(f, "detector = \"{det}\"")?;
        let b = &self.rf_budget;
        writeln!(f, "\n[rf]")?;
        writeln!(f, "p_r_dbm = {}", b.p_r_dbm)?;
        writeln!(f, "f_rf = {:e}", b.f_rf)?;
        writeln!(f, "alpha_t = {}", b.alpha_t)?;
        writeln!(f, "h_km = {}", b.h_km)?;
        writeln!(f, "r_n_m = {}", b.r_n_m)?;
        writeln!(f, "b_r = {:e}", b.b_r)?;
        writeln!(f, "temp_k = {}", b.temp_k)?;
        match b.user_distance_m {
            Some(d) => writeln!(f, "user_distance_m = {d}")?,
            None => writeln!(f, "# user_distance_m unset: slant range {:.3} m", b.distance_m())?,
        }
        writeln!(f, "omega = {}", b.omega)?;
        writeln!(f, "m = {}", c.m)?;
        writeln!(f, "n_t = {}", c.n_t)?;
        writeln!(f, "n_users = {}", c.n_users)?;
        writeln!(f, "rho = {}", c.rho)?;
        writeln!(f, "\n[thresholds]")?;
        writeln!(f, "delta_th_db = {}", self.delta_th_db)?;
        writeln!(f, "gamma_th_db = {}", self.gamma_th_db)?;
        let s = &self.sim;
        writeln!(f, "\n[sim]")?;
        writeln!(f, "samples = {}", s.samples)?;
        writeln!(f, "seed = {}", s.seed)?;
        let em = match s.effective_mode {
            EffectiveMode::Paper => "paper",
            EffectiveMode::Strict => "strict",
        };
        writeln!(f, "effective_mode = \"{em}\"")?;
        let asnr = match s.aser_snr {
            AserSnr::WeakerHop => "weaker_hop",
            AserSnr::Gated => "gated",
        };
        writeln!(f, "aser_snr = \"{asnr}\"")?;
        writeln!(f, "z1_terms = {}", s.z1_terms)?;
        writeln!(f, "max_z1_terms = {}", s.max_z1_terms)?;
        writeln!(f, "expert_im_dd = {}", s.expert_im_dd)?;
        writeln!(f, "power_sweep = \"{}\"", s.power_sweep.as_str())
    }
}
