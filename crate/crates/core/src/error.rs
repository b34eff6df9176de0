use thiserror::Error;

/// Errors raised by the physics and numerics in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PorcError {
    #[error("mass and radius must be positive (m = {m}, r = {r})")]
    NonPositiveMassOrRadius { m: f64, r: f64 },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("dimensionless ratio {0} is undefined at omega = 0")]
    RatioUndefined(&'static str),
    #[error("degenerate extremum at theta = {theta} (|V''| = {curvature:e})")]
    DegenerateExtremum { theta: f64, curvature: f64 },
    #[error("extremum finder disagrees with closed-form location: {0}")]
    InternalConsistency(String),

    #[error("elliptic modulus k = {0} outside [0, 1)")]
    ModulusOutOfRange(f64),

    #[error("energy {energy} lies on the window boundary {boundary}")]
    SeparatrixEnergy { energy: f64, boundary: f64 },
    #[error("critical regime: closed forms are singular at this frequency")]
    CriticalRegime,
    #[error("special solution unavailable: {0}")]
    CaseUnavailable(&'static str),
    #[error("integration step too large: relative energy drift {0:e}")]
    StepTooLarge(f64),

    #[error("regime mismatch: {0}")]
    RegimeMismatch(&'static str),
    #[error("no false vacuum exists (requires omega > omega_c / 2 and omega_c > 0)")]
    NoFalseVacuum,
    #[error("bounce equation is singular at a_mag = 2")]
    MeaninglessCase,
    #[error("action quadrature tail did not converge (T = {0})")]
    TailNotConverged(f64),

    #[error("fluctuation grid too short: plateau mismatch {0:e}")]
    GridTooShort(f64),
    #[error("eigenvalue iteration did not converge: {0}")]
    NotConverged(String),

    #[error("m r^2 omega_c / hbar = {0} is not a positive integer")]
    NonIntegerQesParameter(f64),
    #[error("continued fraction degenerates at beta = 0; roots are eta = 4 r^2")]
    FreeRotorLimit,
    #[error("continued fraction denominator vanished near eta = {0}")]
    PoleHit(f64),
    #[error("continued-fraction and matrix eigenvalues disagree: {cf} vs {matrix}")]
    OracleMismatch { cf: f64, matrix: f64 },
}

impl PorcError {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            PorcError::NonPositiveMassOrRadius { .. } => "NonPositiveMassOrRadius",
            PorcError::InvalidParameter { .. } => "InvalidParameter",
            PorcError::RatioUndefined(_) => "RatioUndefined",
            PorcError::DegenerateExtremum { .. } => "DegenerateExtremum",
            PorcError::InternalConsistency(_) => "InternalConsistency",
            PorcError::ModulusOutOfRange(_) => "ModulusOutOfRange",
            PorcError::SeparatrixEnergy { .. } => "SeparatrixEnergy",
            PorcError::CriticalRegime => "CriticalRegime",
            PorcError::CaseUnavailable(_) => "CaseUnavailable",
            PorcError::StepTooLarge(_) => "StepTooLarge",
            PorcError::RegimeMismatch(_) => "RegimeMismatch",
            PorcError::NoFalseVacuum => "NoFalseVacuum",
            PorcError::MeaninglessCase => "MeaninglessCase",
            PorcError::TailNotConverged(_) => "TailNotConverged",
            PorcError::GridTooShort(_) => "GridTooShort",
            PorcError::NotConverged(_) => "NotConverged",
            PorcError::NonIntegerQesParameter(_) => "NonIntegerQesParameter",
            PorcError::FreeRotorLimit => "FreeRotorLimit",
            PorcError::PoleHit(_) => "PoleHit",
            PorcError::OracleMismatch { .. } => "OracleMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, PorcError>;
