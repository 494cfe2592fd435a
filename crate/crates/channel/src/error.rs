use fsorf_specfun::SpecialError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{func}: x = {x} outside the support")]
    Domain { func: &'static str, x: f64 },

    #[error("{func}: value {value} escaped [0, 1]")]
    OutOfRange { func: &'static str, value: f64 },

    #[error(transparent)]
    Special(#[from] SpecialError),
}

pub type Result<T> = std::result::Result<T, ChannelError>;

pub(crate) fn require(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}

/// Clamps round-off excursions of a probability; larger ones are errors.
pub(crate) fn probability(func: &'static str, value: f64) -> Result<f64> {
    const SLACK: f64 = 1e-9;
    if value.is_finite() && value > -SLACK && value < 1.0 + SLACK {
        Ok(value.clamp(0.0, 1.0))
    } else {
        Err(ChannelError::OutOfRange { func, value })
    }
}
