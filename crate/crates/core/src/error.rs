use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: out-of-range symbols, inconsistent dimensions, …
    #[error("validation: {0}")]
    Validation(String),

    /// The requested operation is not defined for this system shape.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Ball sizes past the 128-bit range are refused rather than approximated.
    #[error("ball size overflows 128-bit integers (d = {d}, n = {n})")]
    BallOverflow { d: usize, n: usize },

    /// Brute-force enumeration would exceed the feasibility guard.
    #[error("brute force infeasible: {candidates:.3e} candidate labelings exceed 2^26")]
    Infeasible { candidates: f64 },

    /// A closed-form series was asked for a system whose trajectory does not
    /// satisfy the method's defining inequality.
    #[error("series precondition violated: {0}")]
    SeriesPrecondition(String),

    /// One-generator iteration whose increments keep oscillating past the
    /// iteration budget; carries the last observed oscillation width.
    #[error("no convergence after {iterations} steps (increment oscillation width {width:.3e})")]
    Convergence { iterations: usize, width: f64 },

    /// A dominating symbol was certified but violated along the trajectory.
    #[error("dominance violated at step {step}")]
    DominanceViolated { step: usize },

    /// Operation is undefined on systems with dead (count-zero) symbols.
    #[error("dead symbol {symbol}: {context}")]
    DeadSymbol { symbol: usize, context: &'static str },

    /// Dual computations that must agree disagreed beyond tolerance.
    #[error("internal consistency: |{a} - {b}| = {diff:.3e} exceeds {limit:.3e}")]
    Inconsistent { a: f64, b: f64, diff: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
