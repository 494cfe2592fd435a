use serde::Deserialize;

use crate::config::{ConfigFile, FsoSection, RfSection, SimSection, ThresholdSection};
use crate::sweep::Metric;

const SOURCES: &[(&str, &str)] = &[
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig3", include_str!("../presets/fig3.toml")),
    ("fig4", include_str!("../presets/fig4.toml")),
    ("fig5", include_str!("../presets/fig5.toml")),
    ("fig6", include_str!("../presets/fig6.toml")),
    ("fig7", include_str!("../presets/fig7.toml")),
    ("fig8", include_str!("../presets/fig8.toml")),
    ("fig9", include_str!("../presets/fig9.toml")),
    ("fig10", include_str!("../presets/fig10.toml")),
];

/// A figure preset: shared overrides plus one entry per plotted curve.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub metric: Metric,
    pub ptx_dbm: String,
    #[serde(default)]
    pub constellation: Option<String>,
    #[serde(default)]
    pub theta: Option<f64>,
    /// Sweeps the delay exponent instead of (in addition to) power.
    #[serde(default)]
    pub thetas: Option<Vec<f64>>,
    #[serde(default)]
    pub base: ConfigFile,
    pub curve: Vec<Curve>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Curve {
    pub label: String,
    #[serde(default)]
    pub metric: Option<Metric>,
    #[serde(default)]
    pub constellation: Option<String>,
    #[serde(default)]
    pub fso: FsoSection,
    #[serde(default)]
    pub rf: RfSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default)]
    pub sim: SimSection,
}

impl Curve {
    pub fn overrides(&self) -> ConfigFile {
        ConfigFile {
            fso: self.fso.clone(),
            rf: self.rf.clone(),
            thresholds: self.thresholds.clone(),
            sim: self.sim.clone(),
        }
    }
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn load(name: &str) -> Result<Preset, String> {
    let (_, src) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| format!("unknown preset {name:?}; available: {}", names().collect::<Vec<_>>().join(", ")))?;
    toml::from_str(src).map_err(|e| format!("preset {name}: {e}"))
}
