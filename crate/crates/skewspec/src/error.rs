//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Rational construction with a zero denominator.
    #[error("zero denominator")]
    ZeroDenominator,

    /// A scalar or interval endpoint falls outside [0, 1].
    #[error("value {0} outside [0, 1]")]
    OutOfUnitRange(String),

    /// Interval bounds are inverted.
    #[error("interval bounds inverted: [{0}, {1}]")]
    InvertedInterval(String, String),

    /// A piecewise-linear map definition violates its invariants.
    #[error("invalid map nodes: {0}")]
    InvalidNodes(String),

    /// Map evaluation outside the domain [0, 1].
    #[error("evaluation point {0} outside [0, 1]")]
    OutOfDomain(String),

    /// Image iteration did not reach [0, 1] within the cap; the map is
    /// either not mixing or the cap is too small.
    #[error("interval did not cover [0, 1] within {cap} iterations")]
    NotLeoWithinCap { cap: usize },

    /// A transition-matrix definition violates its invariants.
    #[error("invalid subshift: {0}")]
    InvalidSft(String),

    /// A symbol outside 1..=n.
    #[error("symbol {symbol} outside alphabet 1..={alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    /// A word or base point violates adjacency constraints.
    #[error("invalid word: {0}")]
    InvalidWord(String),

    /// No power of the transition matrix is all-positive up to the
    /// Wielandt bound; the subshift is not mixing.
    #[error("transition matrix is not primitive")]
    NotPrimitive,

    /// No connecting word of the requested length exists.
    #[error("no path of length {len} from symbol {from} to symbol {to}")]
    NoPath { from: usize, to: usize, len: usize },

    /// Gap budget smaller than agreement depth plus primitivity exponent.
    #[error("gap budget {k} too small: need at least h + P = {h} + {p}")]
    BudgetTooSmall { k: usize, h: usize, p: usize },

    /// A tolerance outside the open interval (0, 1).
    #[error("eps {0} outside (0, 1)")]
    EpsOutOfRange(String),

    /// A family member has expansion rate <= 1.
    #[error("map {index} is not expanding (rate {rate})")]
    NotExpanding { index: usize, rate: String },

    /// A structural hypothesis of a construction fails (for example
    /// non-surjective fibre maps).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The adaptive schedule failed to trigger within the forced bound.
    #[error("no schedule trigger within {0} translation steps")]
    NoTrigger(usize),

    /// No periodic word up to the period cap yields a mixing composite.
    #[error("no mixing anchor found with period <= {max_period}")]
    NoAnchorFound { max_period: usize },

    /// pullback precondition failed: the forward image chain does not
    /// cover the target.
    #[error("target not covered by the forward image of the source")]
    TargetNotCovered,

    /// The witness point is not exactly periodic with the claimed period.
    #[error("witness not periodic: {0}")]
    NotPeriodic(String),

    /// An internal postcondition failed; this falsifies the
    /// implementation, not the mathematics, and is always a bug.
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    /// Config file problem, anchored to a line.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
