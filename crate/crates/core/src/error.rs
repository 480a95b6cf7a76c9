use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// The variants fall into three groups that the CLI maps onto distinct exit
/// codes: bad input, exceeded size caps, and internal inconsistencies.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid polynomial {input:?}: {message}")]
    Polynomial { input: String, message: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("edge {0} is a loop and cannot be contracted")]
    LoopContraction(usize),

    #[error("degenerate series: the linear coefficient is zero")]
    Degenerate,

    #[error("series has nonzero constant term where none is allowed")]
    NonzeroConstant,

    #[error("scaling factor must be nonzero")]
    ZeroScale,

    #[error("ambient edge counts differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),

    #[error("edge map is not injective: two edges map to {0}")]
    NonInjective(usize),

    #[error("{what} = {actual} exceeds the configured cap of {limit}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),

    #[error("family {family}: {message}")]
    FamilyRange { family: String, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn poly(input: &str, message: impl Into<String>) -> Self {
        Error::Polynomial {
            input: input.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by limits or
    /// by a bug in the engine.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::CapExceeded { .. } | Error::Inconsistent(_))
    }
}
