use thiserror::Error;

pub type Result<T, E = EsdError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EsdError {
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("amplitudes are not normalized: |α|² + |β|² = {norm}")]
    NotNormalized { norm: f64 },
    #[error("populations sum to {sum}, expected 1")]
    PopulationSum { sum: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("coherence |{name}| = {magnitude} exceeds the positivity bound {bound}")]
    CoherenceTooLarge {
        name: &'static str,
        magnitude: f64,
        bound: f64,
    },
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceDefect { trace: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("first-stage damping {p_first} does not match the NOT point p_n = {p_n}")]
    InconsistentScenario { p_first: f64, p_n: f64 },
    #[error("unknown optical program: {0}")]
    UnknownProgram(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
