use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty lexicon")]
    EmptyLexicon,

    #[error("not a lexicon word: {0:?}")]
    NotInLexicon(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rule {0} has not been scored")]
    Unscored(String),

    #[error("rule never fires on any frequency-bearing lexicon word")]
    NeverFires,
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
