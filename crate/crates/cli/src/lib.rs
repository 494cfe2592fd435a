//! Configuration, figure presets, power sweeps and CSV output for the
//! satellite-UAV FSO/RF relay analysis.

pub mod config;
pub mod preset;
pub mod sweep;
pub mod validate;

pub use config::{ConfigError, ConfigFile, Resolved};
pub use sweep::{run_sweep, run_sweep_with_config, write_csv, Grid, Metric, SweepError, SweepOutput, SweepRequest, SweepRow};
pub use validate::{validate_config, Report};
