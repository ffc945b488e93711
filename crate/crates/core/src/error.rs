use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature error: {0}")]
    Signature(String),
    #[error("at most 16 odd coordinates are supported, got {0}")]
    TooManyOdd(usize),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("no value given for coordinate `{0}`")]
    MissingCoordinate(String),
    #[error("parity mismatch: coordinate `{coordinate}` is {expected} but its value `{value}` is not")]
    ParityMismatch { coordinate: String, expected: &'static str, value: String },
    #[error("jet order must be non-negative, got {0}")]
    NegativeOrder(i64),
    #[error("center mismatch: {0}")]
    CenterMismatch(String),
    #[error("jet precision exhausted: {0}")]
    InsufficientOrder(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular differential: {0}")]
    SingularDifferential(String),
    #[error("not a submersion at the given point: {0}")]
    NotSubmersion(String),
    #[error("inversion did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("ideal generators are not independent at the base point: {0}")]
    DependentGenerators(String),
    #[error("ideal generator does not vanish at the base point: {0}")]
    GeneratorNotVanishing(String),
    #[error("invariance check failed: {0}")]
    NotInvariant(String),
    #[error("not transitive at the given point: {0}")]
    NotTransitive(String),
    #[error("point is not in the chart: {0}")]
    PointNotInChart(String),
    #[error("group element is not invertible: {0}")]
    NotInvertible(String),
    #[error("missing transition between charts {0} and {1}")]
    MissingTransition(usize, usize),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}
