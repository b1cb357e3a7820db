use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: ambient mismatch, wrong lengths, empty sets, bad encodings.
    #[error("structural error: {0}")]
    Structural(String),

    /// The structure is valid but outside what can be decided exactly.
    #[error("unsupported structure: {0}")]
    Unsupported(String),

    #[error("coordinate overflow: |{value}| exceeds the limit {limit}")]
    Overflow { value: i128, limit: i64 },

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    /// A construction was asked for below the parameter range where it is proved.
    #[error("threshold unmet{}: need {required}, got {got}", color.map(|c| format!(" for color {c}")).unwrap_or_default())]
    Threshold {
        color: Option<usize>,
        required: u64,
        got: u64,
    },

    /// Layer data has not settled yet at the requested parameter.
    #[error("not ready: {0}")]
    NotReady(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
