use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the series engine and the analytic evaluators built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a series whose lowest nonzero order ({divisor}) exceeds the dividend's ({dividend})")]
    DivisionByZeroSeries { dividend: usize, divisor: usize },

    #[error("composition requires the inner series to have zero constant term, got {0}")]
    CompositionRequiresZeroConstant(Complex64),

    #[error("logarithm/power requires constant term 1, got {0}")]
    BranchPointAtOrigin(Complex64),

    #[error("Blaschke zero {0} is not inside the open unit disk")]
    ZeroOutsideDisk(Complex64),

    #[error("rotation {0} is not unimodular")]
    NonUnimodularRotation(Complex64),

    #[error("pole hit at z = {0}")]
    PoleHit(Complex64),

    #[error("critical point hit at z = {0} (|f'(z)| below 1e-14)")]
    CriticalPointHit(Complex64),

    #[error("no sign change of {name} on [{lo}, {hi}]")]
    BracketFailure { name: &'static str, lo: f64, hi: f64 },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("input series is not normalized (f(0) = {f0}, f'(0) = {f1})")]
    NonNormalizedInput { f0: Complex64, f1: Complex64 },

    #[error("|z| = {radius} exceeds the evaluation radius {limit} of a truncated series")]
    OutsideEvaluationRadius { radius: f64, limit: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
