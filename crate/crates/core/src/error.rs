use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("shape-space mass is not positive ({value:e}) at alpha = {alpha}")]
    NonPositiveShapeMass { alpha: f64, value: f64 },

    #[error("mass matrix is singular (pivot {pivot:e})")]
    SingularMassMatrix { pivot: f64 },

    #[error("saddle-point matrix is rank deficient")]
    RankDeficientSaddle,

    #[error("velocity violates the rolling constraints (residual {residual:e} > {tolerance:e})")]
    ConstraintViolation { residual: f64, tolerance: f64 },

    #[error("non-finite state derivative at t = {t}")]
    NonFinite { t: f64 },

    #[error("simulation failed at t = {t}: {source}")]
    Simulation {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid torque profile: {0}")]
    InvalidProfile(String),

    #[error("invalid simulation settings: {0}")]
    InvalidSettings(String),

    #[error("trajectory grids differ: {0}")]
    GridMismatch(String),

    #[error("non-finite state component `{0}`")]
    NonFiniteState(&'static str),

    #[error("{0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
