use core::fmt;

/// Errors for state validation and simulator operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix or register dimensions do not match the operation.
    DimensionMismatch { expected: usize, got: usize },
    /// A matrix expected to be square is not.
    NotSquare { rows: usize, cols: usize },
    /// Hermiticity violation larger than the tolerance (max entry |M - M†|).
    NotHermitian(f64),
    /// Trace differs from 1 by more than the tolerance.
    TraceNotOne(f64),
    /// Minimum eigenvalue below the PSD tolerance.
    NotPositive(f64),
    /// State vector norm differs from 1 by more than the tolerance.
    NotNormalized(f64),
    /// Operator expected unitary fails U†U = I beyond tolerance.
    NotUnitary(f64),
    /// Kraus set fails trace preservation (max entry |ΣK†K - I|).
    NotTracePreserving(f64),
    /// Projector set is not idempotent/complete within tolerance.
    BadProjectors(f64),
    /// Gate targets repeat or fall outside the register.
    BadTargets(&'static str),
    /// A label outside its admissible set (Bell label, setting index, ...).
    InvalidLabel(&'static str),
    /// A readout confusion matrix is singular and cannot be inverted.
    SingularReadout,
    /// Non-finite entries where finite values are required.
    NotFinite,
    /// Parameter outside its admissible range.
    OutOfRange { name: &'static str, value: f64 },
    /// Strategy operator constraints violated beyond tolerance.
    InfeasibleStrategy(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotSquare { rows, cols } => write!(f, "matrix is not square: {rows}x{cols}"),
            Error::NotHermitian(e) => write!(f, "not Hermitian (violation {e:.3e})"),
            Error::TraceNotOne(t) => write!(f, "trace is not 1 (got {t})"),
            Error::NotPositive(l) => {
                write!(f, "not positive semidefinite (min eigenvalue {l:.3e})")
            }
            Error::NotNormalized(n) => write!(f, "state not normalized (norm² = {n})"),
            Error::NotUnitary(e) => write!(f, "not unitary (violation {e:.3e})"),
            Error::NotTracePreserving(e) => {
                write!(f, "Kraus set not trace preserving (violation {e:.3e})")
            }
            Error::BadProjectors(e) => write!(f, "invalid projector set (violation {e:.3e})"),
            Error::BadTargets(s) => write!(f, "bad gate targets: {s}"),
            Error::InvalidLabel(s) => write!(f, "invalid label: {s}"),
            Error::SingularReadout => write!(f, "readout confusion matrix is singular"),
            Error::NotFinite => write!(f, "non-finite matrix entries"),
            Error::OutOfRange { name, value } => {
                write!(f, "parameter {name} out of range (got {value})")
            }
            Error::InfeasibleStrategy(s) => write!(f, "infeasible strategy: {s}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
