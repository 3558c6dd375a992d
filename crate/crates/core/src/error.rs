use alloc::string::String;
use core::fmt;

use crate::poly::VarSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    VarMismatch { left: VarSpace, right: VarSpace },
    UnsupportedPair { line: u32, n: u32 },
    /// A polynomial does not have the grading an operation requires.
    Degree(String),
    NotInvariant(String),
    NotStable(String),
    NotScalar(String),
    /// λ = 0 or an otherwise invalid spectral parameter.
    Parameter(String),
    Inconsistent(String),
    DoesNotVanish(String),
    Remainder(String),
    NotLeftInvariant(String),
    Schema(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::VarMismatch { left, right } => write!(
                f,
                "variable spaces differ: (v={},z={},t={},xi={}) vs (v={},z={},t={},xi={})",
                left.v, left.z, left.t, left.xi, right.v, right.z, right.t, right.xi
            ),
            Error::UnsupportedPair { line, n } => write!(f, "unsupported pair: line {} with n={}", line, n),
            Error::Degree(m) => write!(f, "degree error: {}", m),
            Error::NotInvariant(m) => write!(f, "not invariant: {}", m),
            Error::NotStable(m) => write!(f, "subspace not stable: {}", m),
            Error::NotScalar(m) => write!(f, "restriction is not scalar: {}", m),
            Error::Parameter(m) => write!(f, "bad parameter: {}", m),
            Error::Inconsistent(m) => write!(f, "inconsistent system: {}", m),
            Error::DoesNotVanish(m) => write!(f, "does not vanish on the zero set: {}", m),
            Error::Remainder(m) => write!(f, "division leaves a remainder: {}", m),
            Error::NotLeftInvariant(m) => write!(f, "operator is not left-invariant: {}", m),
            Error::Schema(m) => write!(f, "schema error: {}", m),
        }
    }
}

impl core::error::Error for Error {}
