use thiserror::Error;

/// Errors raised by the workbench operations.
///
/// Precondition and parse problems are distinguished from internal
/// consistency failures so that callers (the CLI in particular) can map
/// them onto different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("slope must be nonzero")]
    ZeroSlope,
    #[error("same line")]
    SameLine,
    #[error("ground set must be nonempty")]
    EmptyGroundSet,
    #[error("k must be >= 2 (got {0})")]
    RichnessTooSmall(usize),
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("instance too large: {what} is {got}, limit {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("layer mismatch: {0}")]
    LayerMismatch(String),
    #[error("richness exhausted: level {level} threshold {threshold} is below 2")]
    RichnessExhausted { level: usize, threshold: f64 },
    #[error("cover failure: line {0} is not covered by any family")]
    CoverFailure(String),
    #[error("no qualifying index")]
    NoQualifyingIndex,
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("random generation exhausted after {0} attempts")]
    GenerationExhausted(usize),
}

impl Error {
    /// Hard-assertion failures: a violated non-asymptotic invariant, as
    /// opposed to bad input.
    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            Error::Assertion(_) | Error::CoverFailure(_) | Error::NoQualifyingIndex
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
