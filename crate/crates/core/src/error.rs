use thiserror::Error;

/// Errors raised by the structure, logic, amalgamation and evaluation layers.
///
/// Negative answers (a structure is not a model, a class fails to amalgamate)
/// are verdicts, not errors. Errors are reserved for malformed input and for
/// configured search caps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("element {element} out of range for domain of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("element {0} listed twice")]
    DuplicateElement(usize),

    #[error("tuple {tuple:?} has length {found}, symbol {symbol} has arity {arity}")]
    TupleArity {
        symbol: String,
        tuple: Vec<usize>,
        found: usize,
        arity: usize,
    },

    #[error("unknown symbol {0}")]
    UnknownSymbol(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("sentence is not monotone: {0}")]
    NotMonotone(String),

    #[error("sentence is not guarded: {0}")]
    NotGuarded(String),

    #[error("signature is not binary: {0}")]
    NonBinary(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("{what} exceeds the configured cap ({requested} > {limit})")]
    CapExceeded {
        what: String,
        requested: u128,
        limit: u128,
    },
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, requested: u128, limit: u128) -> Self {
        Error::CapExceeded {
            what: what.into(),
            requested,
            limit,
        }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
