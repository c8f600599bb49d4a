use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A relation or generator list that cannot be used for triangular rewriting.
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),

    /// Two elements (or an element and a space) live in different rings.
    #[error("presentation mismatch: {0}")]
    PresentationMismatch(String),

    #[error("element is not a unit: {0}")]
    NotInvertible(String),

    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),

    #[error("series order {have} is too short, need at least {need}")]
    SeriesTooShort { have: usize, need: usize },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("group order exceeds the configured bound of {bound}")]
    GroupTooLarge { bound: usize },

    #[error("invalid stack model: {0}")]
    InvalidModel(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("invalid stratified map: {0}")]
    InvalidMap(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("cannot compute term `{0}`")]
    UncomputableTerm(String),

    #[error("parse error: {0}")]
    Parse(String),
}
