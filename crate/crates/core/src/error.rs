use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("job {job} is not a feasible control in this state")]
    InfeasibleControl { job: usize },

    #[error("start time {start} of job {job} is outside its duration table")]
    Domain { job: usize, start: i64 },

    #[error("node budget of {budget} exceeded while building layer {layer}")]
    BudgetExceeded { layer: usize, budget: usize },

    #[error("diagram structure: {0}")]
    Structural(String),

    #[error("theta* = {theta_star} is below the Lagrangian value {theta}; not a valid upper bound")]
    InvalidBound { theta_star: f64, theta: f64 },

    #[error("{n} jobs exceeds the enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("parse error at token {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}
