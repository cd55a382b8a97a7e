use alloc::string::String;
use core::fmt;

/// Errors raised by the exact algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotAlternating,
    OddDimension,
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    NotPrime(u64),
    DegenerateCubic,
    DegenerateForm,
    /// Invariant factors of an alternating matrix did not pair up.
    PairingFailure,
    NotInSiegelDomain(String),
    UnsupportedDimension(u32),
    InvalidInput(String),
    CapExceeded(String),
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotAlternating => write!(f, "matrix is not alternating"),
            Error::OddDimension => write!(f, "alternating matrix has odd size"),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)
            }
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::DegenerateCubic => write!(f, "cubic has vanishing leading coefficient"),
            Error::DegenerateForm => write!(f, "form is degenerate"),
            Error::PairingFailure => write!(f, "invariant factors of an alternating form failed to pair"),
            Error::NotInSiegelDomain(why) => write!(f, "not in the Siegel domain: {why}"),
            Error::UnsupportedDimension(d) => write!(f, "unsupported dimension {d}"),
            Error::InvalidInput(why) => write!(f, "invalid input: {why}"),
            Error::CapExceeded(why) => write!(f, "search cap exceeded: {why}"),
            Error::Internal(why) => write!(f, "internal consistency failure: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
