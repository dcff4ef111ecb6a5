use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("shift clips window: {0}")]
    ShiftOutOfWindow(String),
    #[error("query outside window: {0}")]
    QueryOutOfWindow(String),
    #[error("reversed times: from t={from} to t={to}")]
    ReversedTimes { from: f64, to: f64 },
    #[error("event count {events} exceeds brute-force cap {cap}")]
    OracleCapExceeded { events: usize, cap: usize },
    #[error("window does not cover {0}")]
    WindowCoverage(String),
    #[error("invalid block parameters: {0}")]
    InvalidBlockParams(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty sample: {0}")]
    EmptySample(String),
    #[error("contaminated run aborted: {0}")]
    ContaminatedRun(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
