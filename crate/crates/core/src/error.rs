use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("player count {n} outside supported range 2..={max}")]
    UnsupportedDimension { n: usize, max: usize },

    #[error("coordinate {index} must be a finite positive number, got {value}")]
    NonPositiveCoordinate { index: usize, value: f64 },

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("invalid improving set parameter: {0}")]
    InvalidParameter(String),

    #[error("a bargaining problem needs at least one generator")]
    EmptyProblem,

    #[error("candidate set is empty")]
    EmptyCandidates,

    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("permutation enumeration refused for n = {n} (> {max}); use sampled permutations")]
    TooManyPermutations { n: usize, max: usize },

    #[error("resolution must be positive and finite, got {0}")]
    InvalidResolution(f64),

    #[error("grid too large: about {estimate} points (limit {limit})")]
    GridTooLarge { estimate: f64, limit: f64 },

    #[error("problems are not nested: generator {point:?} of the smaller problem lies outside the larger one")]
    NotNested { point: Vec<f64> },

    #[error("improving set rejected on condition {condition}: {detail}")]
    InvalidImprovingSet { condition: String, detail: String },

    #[error(
        "no separating weight found (best margin {margin:.3e}) - set is likely not an improving set; certificate: {certificate:?}"
    )]
    NoSeparatingWeight { margin: f64, certificate: Vec<Vec<f64>> },

    #[error("solution returned an empty chosen set on a nonempty pool")]
    EmptySolution,

    #[error("unknown solution rule `{0}`")]
    UnknownRule(String),

    #[error("{field}: {message}")]
    Schema { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}
