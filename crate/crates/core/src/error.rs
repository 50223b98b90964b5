use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input lies outside the function's box domain.
    #[error("{function}: coordinate {index} = {value} outside [{lower}, {upper}]")]
    Domain {
        function: String,
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("objective returned non-finite value {value} for agent {agent}")]
    Evaluation { agent: usize, value: f64 },

    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("policy file: {0}")]
    PolicyFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
