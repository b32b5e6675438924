use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A floor/threshold decision could not be made at the working precision.
    /// Callers should retry with more precision bits; silently guessing would
    /// corrupt every downstream continued-fraction quantity.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// An input is outside the domain where the operation is meaningful
    /// (log underflow, vacuous bounds, oversized subdivisions, ...).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Certified shortest-vector enumeration needs a larger coefficient box
    /// than the caller allowed.
    #[error("search bound too small: certification needs a coefficient box of half-width {needed}, caller allowed {allowed}")]
    SearchBoundTooSmall { needed: u64, allowed: u64 },

    /// The rationals collected by the simplex strategy do not fit in a single
    /// hyperplane. The simplex lemma rules this out, so it signals an
    /// arithmetic bug rather than a recoverable condition.
    #[error("simplex violation: {0}")]
    SimplexViolation(String),

    /// A game strategy failed to produce a legal ball. With parameters in the
    /// allowed range this indicates a strategy bug.
    #[error("no legal move: {0}")]
    NoLegalMove(String),
}

pub type Result<T> = std::result::Result<T, Error>;
