//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Domain and configuration errors.
///
/// Every fallible operation in this crate fails for one of a small number
/// of reasons: an argument outside its mathematical domain, a parameter
/// set violating an invariant, or a degenerate Markov chain with no unique
/// steady state.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument was NaN or infinite where a finite value is required.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// An argument violated its stated range constraint.
    #[error("{name} = {value} violates {constraint}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Too few samples for the requested estimate.
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    /// Both conditional chains are absorbing; the steady state is not unique.
    #[error("degenerate chain: {0}")]
    DegenerateChain(String),
}
