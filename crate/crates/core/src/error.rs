use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid matrix shape: expected {expected} entries, got {got}")]
    InvalidShape { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("expectation value has imaginary part {0:e}")]
    NonRealExpectation(f64),

    #[error("state vector is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid Bloch parameters: {0}")]
    InvalidBloch(String),

    #[error("invalid axis: |n| = {0}")]
    InvalidAxis(f64),

    #[error("invalid spin: twice-spin must be >= 1, got {0}")]
    InvalidSpin(u32),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("operators do not commute (max |fg - gf| = {0:e})")]
    NonCommuting(f64),

    #[error("observable has a degenerate spectrum")]
    DegenerateSpectrum,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("coefficient matrix is rank deficient (condition {0:e})")]
    RankDeficient(f64),

    #[error("variances are not realizable by any state (residual {0:e})")]
    InconsistentVariances(f64),

    #[error("all pair products vanish: the occupied eigenvalue cannot be identified from variances")]
    AmbiguousDistribution,

    #[error("all candidate denominators vanish while some pair products are nonzero")]
    NumericallyDegenerate,

    #[error("no covariance denominator is large enough to resolve the distribution")]
    VanishingDenominator,

    #[error("observable is not a spin-1 operator with spectrum {{1, 0, -1}}")]
    NotSpinOne,

    #[error("relation requires a qubit (dimension 2), got dimension {0}")]
    NotQubit(usize),

    #[error("invalid Rényi index {0}: must be positive and finite")]
    InvalidRenyiIndex(f64),

    #[error("normalized variance {0} outside [0, 1]")]
    VarianceOutOfRange(f64),

    #[error("entropy {0} outside [0, ln 2]")]
    EntropyOutOfRange(f64),

    #[error("logarithm argument {0} outside (0, 1]")]
    ArgumentOutOfRange(f64),

    #[error("square-root argument {0:e} is negative")]
    DomainError(f64),

    #[error("relation needs {needed} observables, got {got}")]
    MissingObservables { needed: usize, got: usize },

    #[error("unknown relation id `{0}`")]
    UnknownRelation(String),

    #[error("objective did not change across any restart")]
    DegenerateObjective,

    #[error("boundary target {0} is infeasible")]
    InfeasibleTarget(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
