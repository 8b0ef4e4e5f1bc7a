use std::fmt;

use thiserror::Error;

/// A single structural problem found while checking a scenario pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The pattern contains no scenarios at all.
    NoScenarios,
    /// A scenario outcome has no values.
    EmptyOutcome { scenario: usize },
    /// A scenario outcome length differs from the first one.
    UnequalLength {
        scenario: usize,
        expected: usize,
        found: usize,
    },
    /// A scenario probability lies outside (0, 1].
    ProbabilityOutOfRange { scenario: usize, probability: String },
    /// The probabilities do not sum to exactly 1.
    ProbabilitySum { sum: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoScenarios => write!(f, "pattern has no scenarios"),
            Violation::EmptyOutcome { scenario } => {
                write!(f, "scenario {scenario}: outcome is empty")
            }
            Violation::UnequalLength {
                scenario,
                expected,
                found,
            } => write!(
                f,
                "scenario {scenario}: outcome length {found} differs from {expected}"
            ),
            Violation::ProbabilityOutOfRange {
                scenario,
                probability,
            } => write!(
                f,
                "scenario {scenario}: probability {probability} outside (0, 1]"
            ),
            Violation::ProbabilitySum { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1")
            }
        }
    }
}

/// Formats a violation list as a single `;`-separated line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("memory must be at least 1")]
    ZeroMemory,

    #[error("position {position} outside 1..={length}")]
    PositionOutOfRange { position: usize, length: usize },

    #[error("pattern must contain at least one value")]
    EmptyPattern,

    #[error("invalid scenario pattern: {0}")]
    InvalidScenarioPattern(Violations),

    /// The evolved block's first entries would depend on the previous
    /// independent block, so the result is not expressible as a pattern.
    #[error(
        "evolution is boundary-dependent at position {position}: \
         the strategy action there varies with the previous block"
    )]
    BoundaryDependent { position: usize },

    #[error("scenario budget exceeded: {required} cells > cap {cap}")]
    ScenarioCapExceeded { required: u128, cap: u64 },

    #[error("oracle budget exceeded: 3^{contexts} tables > cap {cap}")]
    OracleCapExceeded { contexts: usize, cap: u64 },

    #[error("oracle numeric budget exceeded: probabilities too fine for the fast tableau")]
    OracleOverflow,

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("invalid feed-off parameters: {0}")]
    InvalidFeedoffParams(String),

    #[error("expansion order is not a permutation of 0..{expected}")]
    InvalidPermutation { expected: usize },

    #[error("schedule must contain at least one memory")]
    EmptySchedule,

    #[error("invalid sweep config: {0}")]
    InvalidSweepConfig(String),
}
