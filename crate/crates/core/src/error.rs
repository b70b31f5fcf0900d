use thiserror::Error;

use crate::ring::CoefficientRing;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch {
        left: CoefficientRing,
        right: CoefficientRing,
    },

    #[error("constant term is not a unit in {ring}")]
    NotInvertible { ring: CoefficientRing },

    #[error("residue {residue} is not below modulus {modulus}")]
    BadResidue { residue: usize, modulus: usize },

    #[error("insufficient precision: {requested} terms requested, {available} valid")]
    InsufficientPrecision { requested: usize, available: usize },

    #[error("{p} is not an admissible prime here: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("{p} divides {value}")]
    NotCoprime { value: i64, p: u64 },

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown symbol `{name}` at {line}:{column}")]
    UnknownSymbol {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("while evaluating `{expr}`: {source}")]
    Eval {
        expr: String,
        #[source]
        source: Box<Error>,
    },

    #[error("no candidate verified: {0}")]
    Unverified(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Strips evaluation context, returning the underlying failure.
    pub fn root(&self) -> &Error {
        match self {
            Error::Eval { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_insufficient_precision(&self) -> bool {
        matches!(self.root(), Error::InsufficientPrecision { .. })
    }
}
