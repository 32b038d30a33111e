use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("x = {x} is outside the open domain ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("invalid superpotential parameters: {0}")]
    InvalidSuperpotential(String),

    #[error("alpha + beta = 1 makes the gauge exponent singular")]
    SingularGauge,

    #[error("4*alpha*beta >= 1 gives an imaginary oscillator frequency")]
    ComplexFrequency,

    #[error("sigma = {0} <= 0: the trigonometric model has no bound states")]
    NoBoundStates(f64),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("level n = {n} is not a bound state (a = {a})")]
    LevelOutOfRange { n: usize, a: f64 },

    #[error("model family mismatch: expected {expected}, got {got}")]
    FamilyMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("exponent overflow at node {index}: log value {log_value}")]
    ExponentOverflow { index: usize, log_value: f64 },

    #[error("grid does not match the model domain: {0}")]
    Grid(String),

    #[error("dimension mismatch: {left} vs {right}")]
    Dimension { left: usize, right: usize },

    #[error("zero vector")]
    ZeroVector,

    #[error("operator is not symmetric")]
    NotSymmetric,

    #[error("requested {k} eigenvalues of a {dim}x{dim} operator")]
    EigenCount { k: usize, dim: usize },

    #[error("inverse iteration did not converge for level {level}")]
    NoConvergence { level: usize },

    #[error("wavefunction phase is not constant: imaginary residual {0:e}")]
    Phase(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
