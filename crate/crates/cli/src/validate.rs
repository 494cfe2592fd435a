use std::fmt;

use fsorf_channel::Detector;
use fsorf_link::{fso_average_snr, linear_to_db, rf_average_snr};

use crate::config::{ConfigError, ConfigFile, Resolved};
use crate::sweep::Metric;

#[derive(Debug)]
pub struct Report {
    pub resolved: Resolved,
    pub violations: Vec<ConfigError>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Resolves a config source against the defaults and collects range
/// violations and warnings. Only syntax and unknown keys are hard errors.
pub fn validate_config(src: &str, metric: Option<Metric>) -> Result<Report, ConfigError> {
    let file = ConfigFile::parse(src)?;
    let resolved = file.apply(&Resolved::default());
    let violations: Vec<_> = resolved.violations().into_iter().map(|e| e.located(src)).collect();
    let mut warnings = Vec::new();
    let aser_relevant = matches!(metric, None | Some(Metric::Aser));
    if resolved.channel.detector == Detector::ImDd && !resolved.sim.expert_im_dd && aser_relevant {
        warnings.push(
            "fso.detector = \"im_dd\": ASER is only characterized for heterodyne detection; \
             aser sweeps will fail unless sim.expert_im_dd = true"
                .to_string(),
        );
    }
    Ok(Report {
        resolved,
        violations,
        warnings,
    })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.resolved)?;
        if self.violations.is_empty() {
            let r = &self.resolved;
            if let (Ok(g_r), Ok(g_u)) = (
                fso_average_snr(&r.fso_budget, r.channel.detector),
                rf_average_snr(&r.rf_budget),
            ) {
                writeln!(f, "\n# average SNR at the configured powers")?;
                writeln!(f, "# fso: {:.4} dB", linear_to_db(g_r))?;
                writeln!(f, "# rf:  {:.4} dB", linear_to_db(g_u))?;
            }
        }
        for w in &self.warnings {
            writeln!(f, "\n# warning: {w}")?;
        }
        for e in &self.violations {
            writeln!(f, "\n# error: {e}")?;
        }
        Ok(())
    }
}
