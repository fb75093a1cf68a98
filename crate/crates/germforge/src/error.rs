//! Error type shared by the whole kernel.

use thiserror::Error;

/// Errors produced by parsing, certification and the algebra layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Syntax error in a germ or polynomial expression, with byte position.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A literal that is not an exact rational (e.g. a decimal point).
    #[error("non-rational literal at byte {pos}: {msg}")]
    NonRationalLiteral { pos: usize, msg: String },

    /// Mismatched variable sets between polynomials or against a basis.
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    /// Truncation degree could not be certified within the configured cap.
    #[error("truncation certification failed: {0}")]
    Certification(String),

    /// The requested operation needs finite codimension but the ideal has
    /// certified infinite codimension.
    #[error("infinite codimension: {0}")]
    InfiniteCodimension(String),

    /// A staircase/normal-set computation escaped the working degree.
    #[error("normal set not finite within degree {degree}: {msg}")]
    StaircaseEscapes { degree: u32, msg: String },

    /// Linear or polynomial system with no admissible solution.
    #[error("no admissible solution: {0}")]
    Unsolvable(String),

    /// Exhausted an iteration or numeric work budget.
    #[error("computation budget exhausted: {0}")]
    Budget(String),

    /// Invalid argument or precondition violation at an API boundary.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Numeric (floating-point) stage failed to meet its tolerance.
    #[error("numeric tolerance not met: {0}")]
    Numeric(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
