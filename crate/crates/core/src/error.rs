use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group of order {order} exceeds the limit {limit}")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("chain is not a cycle ({0} nonzero boundary terms)")]
    NotACycle(usize),
    #[error("precision too low: need N >= {needed}, have N = {have}")]
    Precision { needed: u32, have: u32 },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("coefficient of valuation {valuation} < 1 in class {class}")]
    Integrality { class: usize, valuation: i64 },
    #[error("linear step at level {level} is infeasible: residual {residual}")]
    Infeasible { level: u32, residual: String },
    #[error("p^k = {p}^{k} must exceed 2")]
    PrimePowerTooSmall { p: u64, k: u32 },
    #[error("series budget exceeded: {0}")]
    Budget(String),
    #[error("series did not stabilize within {0} terms")]
    NoConvergence(usize),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Verification failures map to exit code 2, everything else to 1.
    pub fn is_verification(&self) -> bool {
        matches!(
            self,
            Error::Verification(_) | Error::Integrality { .. } | Error::NotACycle(_)
        )
    }
}
