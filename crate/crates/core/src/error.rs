use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("distribution must have at least one entry")]
    EmptyDistribution,
    #[error("probability at index {index} is negative or not finite: {value}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, more than 1e-6 away from 1")]
    SumOutOfTolerance { sum: f64 },
    #[error("order alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("Rényi entropy of order 1 (Shannon entropy) is not supported")]
    AlphaIsOne,
    #[error("the bias-corrected estimator needs an integer order >= 2, got {0}")]
    NonIntegerAlpha(f64),
    #[error("leading term for alpha={alpha}, beta={beta} is an unspecified constant")]
    UnsupportedCell { alpha: f64, beta: f64 },
    #[error("dirichlet distributions need a random stream")]
    MissingRng,
    #[error("invalid distribution spec: {0}")]
    InvalidSpec(String),
    #[error("polynomial has degree {degree} but {coeffs} coefficients")]
    DegreeMismatch { degree: usize, coeffs: usize },
    #[error("median of an empty sequence")]
    EmptyInput,
    #[error("Remez exchange did not converge for alpha={alpha}, degree={degree} after {iterations} iterations")]
    NoConvergence {
        alpha: f64,
        degree: usize,
        iterations: usize,
    },
    #[error("degree {0} is outside the supported range 1..=60")]
    DegreeOutOfRange(usize),
    #[error("coefficient magnitude {max_coeff} exceeds the Markov bound {bound}")]
    MarkovBoundViolated { max_coeff: f64, bound: f64 },
    #[error("invalid perturbation delta: {0}")]
    InvalidDelta(String),
    #[error("alpha * (1 + beta) = {0} must be below 1")]
    BetaTooLarge(f64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("support sizes differ: {0} vs {1}")]
    SupportMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("sample budget exceeded: failure rate still {failure_rate} at n = {n}")]
    BudgetExceeded { n: u64, failure_rate: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Process exit code for command-line use: 2 for configuration and I/O
    /// problems, 4 when a search exhausts its budget, 3 for every other
    /// validation or precondition failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse(_) | Error::Io(_) | Error::InvalidSpec(_) => 2,
            Error::BudgetExceeded { .. } => 4,
            _ => 3,
        }
    }
}
