//! Error type shared across the crate.
//!
//! Every fallible operation distinguishes genuine mathematical failure modes
//! (a series that is not fully ramified, a degenerate pair of generators)
//! from exhaustion of the finite precision window. A precision error means
//! "widen the window and retry", never "the answer is probably zero".

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An answer was demanded that cannot be certified inside the current
    /// precision window.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// The reduced Artin-Schreier data does not define a fully ramified
    /// degree-p^2 extension.
    #[error("not fully ramified: {0}")]
    NotFullyRamified(String),

    /// The two generators do not span a two-dimensional space modulo
    /// wp(K0) (elementary abelian case).
    #[error("degenerate extension data: {0}")]
    DegenerateData(String),

    /// Leading-term elimination in the mu/epsilon decomposition failed to
    /// make progress. Not expected when p does not divide b1.
    #[error("decomposition stalled: {0}")]
    DecompositionStall(String),

    /// A runtime check guarding the scaffold construction failed, or an
    /// operation was invoked on an extension outside its hypotheses.
    #[error("scaffold hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Malformed user input (bad prime, bad series literal, bad flags).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code class for the CLI: 2 for input/precision problems.
    /// Mathematical check failures (exit 1) are reported through verdicts,
    /// not through this type.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
