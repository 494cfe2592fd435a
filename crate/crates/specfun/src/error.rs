use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("{func}: no convergence after {terms} terms")]
    NonConvergence { func: &'static str, terms: usize },

    #[error("meijer_g: unsupported parameter class ({0})")]
    UnsupportedClass(String),

    #[error("{func}: result not representable as f64")]
    Overflow { func: &'static str },

    #[error("quadrature: error estimate {estimate:.3e} above tolerance after {intervals} subintervals")]
    QuadratureBudget { estimate: f64, intervals: usize },

    #[error("quadrature: integrand returned non-finite value at x = {0}")]
    NonFiniteIntegrand(f64),
}

pub type Result<T> = std::result::Result<T, SpecialError>;
