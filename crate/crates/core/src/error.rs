use thiserror::Error;

/// Faults raised by the library.
///
/// Negative mathematical answers (an element that is not regular, an inverse
/// along an element that does not exist) are not errors; they are reported
/// through the outcome types of the respective modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mixed-ring operands: {left} and {right}")]
    MixedRings { left: String, right: String },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("{ring} is infinite and cannot be enumerated")]
    Infinite { ring: String },

    #[error("{what} has {size} elements, exceeding the enumeration bound {bound}")]
    BoundExceeded {
        what: String,
        size: String,
        bound: u64,
    },

    #[error("{operation} is not supported over {ring}")]
    Unsupported {
        operation: &'static str,
        ring: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A computed identity that must hold did not. Seeing this means either a
    /// library bug or a counterexample to the underlying mathematics.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Moves a parse error to a different line, keeping its column.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse {
                column, message, ..
            } => Error::Parse {
                line,
                column,
                message,
            },
            other => other,
        }
    }
}
