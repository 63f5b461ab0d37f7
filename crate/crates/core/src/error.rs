//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the exact and numeric kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// A point fed to the transformation lies outside `[0, 1]`.
    #[error("point lies outside [0, 1]")]
    OutOfRange,

    /// An operation required a finite expansion but got an infinite one.
    #[error("expansion is not finite")]
    NotFinite,

    /// An operation required an eventually periodic expansion.
    #[error("expansion is not infinite (periodic or preperiodic)")]
    NotInfinite,

    /// A symbol exceeded the alphabet `{0, ..., m}`.
    #[error("symbol {symbol} exceeds alphabet bound m = {m}")]
    InvalidSymbol { symbol: u32, m: u32 },

    /// A criterion sequence failed one of the hypotheses.
    #[error("criterion hypothesis violated: {0}")]
    HypothesisViolation(String),

    /// No sign change / root found where the theory guarantees one.
    #[error("root isolation failed: {0}")]
    IsolationFailure(String),

    /// Exact orbit verification failed at a specific step.
    #[error("orbit verification failed at step {index}: {detail}")]
    VerificationFailure { index: usize, detail: String },

    /// Series-side checks require `|z| > 1`.
    #[error("|z| <= 1: point lies inside the closed unit disk")]
    InsideDisk,

    /// Power-series evaluation requires `|w| < 1` for the tail bound to close.
    #[error("|w| >= 1: point lies outside the open unit disk")]
    OutsideDisk,

    /// The simultaneous root finder did not converge.
    #[error("root finder did not converge within {iterations} iterations at {bits} bits")]
    NonConvergence { iterations: u32, bits: u32 },

    /// The boundary solver found no on-ray zero.
    #[error("no zero found on the ray: {0}")]
    NoRoot(String),

    /// A conjugate-set bound that the theory guarantees was violated,
    /// indicating an implementation bug.
    #[error("bound violated: {0}")]
    BoundViolation(String),

    /// Malformed input (parse errors, invariant violations at construction).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The map is not unimodal (more than one turning point).
    #[error("map is not unimodal")]
    NotUnimodal,

    /// The map's branch slopes do not share a common absolute value.
    #[error("map is not a uniform expander")]
    NotUniform,

    /// The common slope magnitude does not exceed 1.
    #[error("map is not expanding (|slope| <= 1)")]
    NotExpanding,

    /// Lap counting exceeded the configured branch cap.
    #[error("lap count exceeded cap of {cap} at iterate {n}")]
    ExplodedBreakpointCount { n: usize, cap: usize },

    /// I/O error from file emission.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
