use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Channel(#[from] fsorf_channel::ChannelError),
    #[error(transparent)]
    Special(#[from] fsorf_specfun::SpecialError),
    #[error(transparent)]
    Budget(#[from] fsorf_link::BudgetError),
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("unsupported constellation: {0}")]
    UnsupportedConstellation(String),
    #[error("z1 series not converged after {terms} terms (last/sum = {ratio:.3e})")]
    SeriesTruncation { terms: u32, ratio: f64 },
    #[error("{metric} = {value} outside [0, 1]")]
    Sanity { metric: &'static str, value: f64 },
    #[error("ASER is only characterized for heterodyne detection; enable the expert flag for IM/DD")]
    ImDdAser,
}

pub type Result<T> = std::result::Result<T, MetricsError>;

pub(crate) fn unit_interval(metric: &'static str, value: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if value.is_finite() && (-SLACK..=1.0 + SLACK).contains(&value) {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(MetricsError::Sanity { metric, value })
    }
}
