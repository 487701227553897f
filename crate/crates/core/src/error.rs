use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("GL(n) needs n >= 1")]
    ZeroRank,
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("root {0} does not belong to this root datum")]
    ForeignRoot(String),
    #[error("vanishing set is not closed under negation")]
    NotSymmetric,
    #[error("vanishing set does not come from a block partition of 1..{n}")]
    NotPartition { n: usize },
    #[error("invalid block partition: {0}")]
    InvalidPartition(String),
    #[error("Cartan vector has length {got}, expected {expected}")]
    CartanLength { expected: usize, got: usize },
    #[error("irregular types live on different root data")]
    DatumMismatch,
    #[error("irregular type is tame (r = 0)")]
    TameType,
    #[error("curve needs at least one marked point")]
    NoPoints,
    #[error("duplicate marked point label {0:?}")]
    DuplicateLabel(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("group {group} is not among the acting groups [{acting}]")]
    GroupAbsent { group: String, acting: String },
    #[error("class lives on {class}, expected {expected}")]
    ClassGroupMismatch { class: String, expected: String },
    #[error("expected {expected} classes, got {got}")]
    ClassCount { expected: usize, got: usize },
    #[error("fission order r must be >= 1")]
    ZeroOrder,
    #[error("{inner} is not a Levi subgroup of {outer}")]
    NotLevi { inner: String, outer: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not block diagonal for the given partition")]
    NotBlockDiagonal,
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("need at least one trial")]
    NoTrials,
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("family samples must share shape: {0}")]
    FamilyShape(String),
    #[error("sample parameters must be strictly monotone")]
    NonMonotone,
}
