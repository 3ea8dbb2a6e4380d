//! The error type shared by the whole engine.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, EngineError>;

/// Structured failure modes.  `LimitExceeded` is how every resource ceiling
/// surfaces, so callers can distinguish "too big for this budget" from a
/// genuinely malformed input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    /// An index element was passed to a poset it does not belong to.
    NotInPoset { element: String },
    /// A poset constructor rejected its input (cycle, missing upper bound, …).
    InvalidPoset { reason: String },
    /// A window is malformed (corners out of order, not order-convex, …).
    InvalidWindow { reason: String },
    /// A presentation is malformed (inhomogeneous relation, bad degree, …).
    InvalidPresentation { reason: String },
    /// Two graded objects were combined at incompatible degrees.
    DegreeMismatch { context: &'static str, detail: String },
    /// An operation needed data the caller did not supply.
    MissingInput { reason: String },
    /// Field-level arithmetic failure (division by zero, bad modulus, …).
    Arithmetic { reason: String },
    /// A resource ceiling was hit; `what` names the ceiling.
    LimitExceeded { what: &'static str, used: usize, limit: usize },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::NotInPoset { element } => {
                write!(f, "element {element} is not a member of the poset")
            }
            EngineError::InvalidPoset { reason } => write!(f, "invalid poset: {reason}"),
            EngineError::InvalidWindow { reason } => write!(f, "invalid window: {reason}"),
            EngineError::InvalidPresentation { reason } => {
                write!(f, "invalid presentation: {reason}")
            }
            EngineError::DegreeMismatch { context, detail } => {
                write!(f, "degree mismatch in {context}: {detail}")
            }
            EngineError::MissingInput { reason } => write!(f, "missing input: {reason}"),
            EngineError::Arithmetic { reason } => write!(f, "arithmetic error: {reason}"),
            EngineError::LimitExceeded { what, used, limit } => {
                write!(f, "limit exceeded: {what} needs {used}, ceiling is {limit}")
            }
        }
    }
}

impl core::error::Error for EngineError {}
