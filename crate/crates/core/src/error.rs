use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability vector is empty")]
    EmptyVector,
    #[error("entry {index} is negative or not finite")]
    InvalidEntry { index: usize },
    #[error("entries sum to {sum}, not 1")]
    NotNormalized { sum: String },
    #[error("vector is not sorted in descending order")]
    NotSorted,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("multiplier must be a positive integer")]
    ZeroMultiplier,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension {0} is too large to materialize")]
    DimensionTooLarge(String),
    #[error("catalyst pair does not enable the transformation")]
    InfeasiblePair,
    #[error("catalyst pair is not in slack-piled normal form (entry {index} exceeds its output counterpart)")]
    NotSlackPiled { index: usize },
    #[error("dimension {dim} has no smaller power of {m} to reduce to")]
    NoSmallerDimension { dim: usize, m: usize },
    #[error("inverse temperatures differ: {0} vs {1}")]
    BetaMismatch(f64, f64),
    #[error("partition function not certified finite")]
    PartitionFunctionNotCertified,
    #[error("infeasible energy constraint: budget {budget} is below the ground energy {ground}")]
    InfeasibleEnergy { budget: f64, ground: f64 },
    #[error("energy envelope did not terminate within {0} levels")]
    EnvelopeNotTerminated(usize),
    #[error("A = {0} is below 2; the split inequality is unproven there")]
    AmplificationTooSmall(f64),
    #[error("state is not a valid density matrix: {0}")]
    InvalidState(String),
    #[error("LP size cap exceeded: n = {n} > {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("LP is infeasible")]
    Infeasible,
    #[error("LP is unbounded")]
    Unbounded,
    #[error("LP solution failed exact verification: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
