use thiserror::Error;

/// Everything that can go wrong while building or checking a series.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A factor that should be inverted vanishes at the requested point.
    #[error("pole: {0}")]
    Pole(String),
    /// Two series carry different non-integral prefixes and cannot be added.
    #[error("prefix mismatch: {0}")]
    PrefixMismatch(String),
    /// Variable counts, block splits or chart kinds do not fit together.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A monomial with mixed signs cannot be expanded as a power series.
    #[error("not a power series: {0}")]
    Laurent(String),
    /// A fractional power of q was requested that is not available exactly.
    #[error("not realizable: {0}")]
    NotRealizable(String),
    /// A hypothesis of a bound or identity is not satisfied by the inputs.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    /// Text that does not parse.
    #[error("parse error: {0}")]
    Parse(String),
    /// Input values out of range.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole(_) => "pole",
            Error::PrefixMismatch(_) => "prefix_mismatch",
            Error::Shape(_) => "shape",
            Error::Laurent(_) => "laurent",
            Error::NotRealizable(_) => "not_realizable",
            Error::Hypothesis(_) => "hypothesis",
            Error::Parse(_) => "parse",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
