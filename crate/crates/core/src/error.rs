use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("invalid spectrum configuration: {0}")]
    InvalidSpectrum(String),

    #[error("mode table of {requested} entries exceeds the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("time step {dt} exceeds the step cap for M = {modes}; use dt <= {cap}")]
    StepCap { dt: f64, cap: f64, modes: usize },

    #[error("non-finite state for particle {particle} at t = {t}")]
    NonFinite { particle: usize, t: f64 },

    #[error("pair process cannot start at the excluded point (x = {x}, y = {y})")]
    ExcludedPoint { x: f64, y: f64 },

    #[error("test function is not C1: {0}")]
    NotC1(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
