use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field has {found} samples but the grid has {expected} points")]
    SizeMismatch { expected: usize, found: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("state has a node: min |psi| = {min_modulus:e} is not above the floor {floor:e}")]
    NodalState { min_modulus: f64, floor: f64 },

    #[error("state developed a node at t = {time}")]
    NodalStateAt { time: f64 },

    #[error("operation needs a 1D grid, got dimension {0}")]
    UnsupportedDimension(usize),

    #[error("functional index must be in 1..=5, got {0}")]
    InvalidFunctionalIndex(usize),

    #[error("gauge element needs lambda != 0 and finite parameters (lambda = {lambda}, gamma = {gamma})")]
    InvalidGaugeElement { lambda: f64, gamma: f64 },

    #[error("degenerate family: nu1 = 0")]
    DegenerateFamily,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("symplectic probe needs a nonzero point")]
    ZeroPoint,

    #[error("time step {dt} violates the stability bound {limit}")]
    StabilityGuard { dt: f64, limit: f64 },

    #[error("evolution became non-finite at t = {time}")]
    Unstable { time: f64 },

    #[error("diagnostic needs at least 3 snapshots, trajectory has {0}")]
    InsufficientSnapshots(usize),

    #[error("diagnostic needs uniformly spaced snapshots")]
    NonUniformSnapshots,

    #[error("not linearizable: {0}")]
    NotLinearizable(String),

    #[error("linearizing gauge element failed its post-check (deviation {deviation:e})")]
    LinearizationCheck { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
