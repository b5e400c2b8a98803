use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit width {0} outside 1..=64")]
    InvalidBitWidth(u32),
    #[error("leak shift {0} outside 1..=64")]
    InvalidLeakShift(u32),
    #[error("density {0} outside [0, 1]")]
    InvalidDensity(f64),
    #[error("invalid {what} range [{lo}, {hi}]")]
    InvalidRange {
        what: &'static str,
        lo: i64,
        hi: i64,
    },
    #[error("network must have at least one neuron")]
    EmptyNetwork,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("raster is empty")]
    EmptyRaster,
    #[error("window {window} exceeds raster length {rows}")]
    WindowTooLarge { window: usize, rows: usize },
    #[error("delay {tau} must be smaller than trace length {len}")]
    DelayTooLarge { tau: usize, len: usize },
    #[error("state space of {required} states exceeds budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("cannot summarize an empty group")]
    EmptyGroup,
    #[error("grid field `{0}` is empty")]
    EmptyGrid(&'static str),
    #[error("at least {required} seeds needed, got {found}")]
    TooFewSeeds { required: usize, found: usize },
    #[error("run {run_id} (n={n}, density={density}, bits={bits}): {source}")]
    Cell {
        run_id: usize,
        n: usize,
        density: f64,
        bits: u32,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
