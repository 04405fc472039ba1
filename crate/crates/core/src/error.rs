use alloc::string::String;
use core::fmt;

/// Errors raised by the library. Each variant carries enough context to be
/// printed directly by a front end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A lattice name or expression could not be parsed; `pos` counts characters.
    Parse { pos: usize, msg: String },
    /// The Gram matrix is not even, not symmetric or degenerate.
    InvalidLattice(String),
    /// An operation needing a 2-elementary lattice received something else.
    NotTwoElementary,
    /// A transition or triple violated the parity or range rules.
    InvalidTriple(String),
    /// Input outside the range where a construction is defined.
    OutOfRange(String),
    /// A numerical evaluation cannot reach the requested accuracy.
    Precision(String),
    /// A point lies on a wall or outside the domain of convergence.
    Domain(String),
    /// An internal consistency check failed.
    Inconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at {pos}: {msg}"),
            Error::InvalidLattice(m) => write!(f, "invalid lattice: {m}"),
            Error::NotTwoElementary => f.write_str("lattice is not 2-elementary"),
            Error::InvalidTriple(m) => write!(f, "invalid triple: {m}"),
            Error::OutOfRange(m) => write!(f, "out of range: {m}"),
            Error::Precision(m) => write!(f, "insufficient precision: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Inconsistent(m) => write!(f, "consistency failure: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
