//! The pattern and strategy file formats.
//!
//! Patterns travel as JSON with every rational written as a string
//! (`"-2"`, `"1/8"`), never as a float, so files round-trip exactly:
//!
//! ```json
//! {"kind": "deterministic", "values": ["-2", "2", "3"]}
//! {"kind": "scenario", "scenarios": [{"prob": "1/2", "values": ["1"]},
//!                                    {"prob": "1/2", "values": ["-1"]}]}
//! ```
//!
//! An optional top-level `provenance` string records where ingested data
//! came from. Strategies export as
//! `{"memory": m, "entries": [{"context": [...], "action": -1|0|1}]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use patmark_core::{
    Context, DeterministicPattern, ParseRatError, Pattern, Rat, Scenario, ScenarioPattern,
    TabulatedStrategy, Violations,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{location}: {source}")]
    Rational {
        location: String,
        source: ParseRatError,
    },
    #[error("invalid scenario pattern: {0}")]
    InvalidPattern(Violations),
    #[error("{0}")]
    Other(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum PatternDoc {
    Deterministic {
        values: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        provenance: Option<String>,
    },
    Scenario {
        scenarios: Vec<ScenarioDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        provenance: Option<String>,
    },
}

#[derive(Serialize, Deserialize)]
struct ScenarioDoc {
    prob: String,
    values: Vec<String>,
}

#[derive(Debug)]
pub struct ParsedPattern {
    pub pattern: Pattern,
    pub provenance: Option<String>,
}

fn parse_rat(text: &str, location: impl Fn() -> String) -> Result<Rat, FormatError> {
    text.parse().map_err(|source| FormatError::Rational {
        location: location(),
        source,
    })
}

fn parse_values(values: &[String], prefix: &str) -> Result<Vec<Rat>, FormatError> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| parse_rat(v, || format!("{prefix}values[{i}]")))
        .collect()
}

pub fn parse_pattern(text: &str) -> Result<ParsedPattern, FormatError> {
    let doc: PatternDoc =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    match doc {
        PatternDoc::Deterministic { values, provenance } => {
            let values = parse_values(&values, "")?;
            let pattern = DeterministicPattern::new(values)
                .map_err(|e| FormatError::Other(e.to_string()))?;
            Ok(ParsedPattern {
                pattern: Pattern::Deterministic(pattern),
                provenance,
            })
        }
        PatternDoc::Scenario {
            scenarios,
            provenance,
        } => {
            let mut empty = Vec::new();
            let mut parsed = Vec::with_capacity(scenarios.len());
            for (i, s) in scenarios.iter().enumerate() {
                let probability = parse_rat(&s.prob, || format!("scenarios[{i}].prob"))?;
                if s.values.is_empty() {
                    empty.push(patmark_core::Violation::EmptyOutcome { scenario: i });
                    continue;
                }
                let values = parse_values(&s.values, &format!("scenarios[{i}]."))?;
                parsed.push(Scenario {
                    probability,
                    outcome: DeterministicPattern::new(values).expect("non-empty values"),
                });
            }
            if !empty.is_empty() {
                return Err(FormatError::InvalidPattern(Violations(empty)));
            }
            // Report every structural violation, not just the first.
            let violations = ScenarioPattern::check(&parsed);
            if !violations.is_empty() {
                return Err(FormatError::InvalidPattern(Violations(violations)));
            }
            let pattern =
                ScenarioPattern::new(parsed).map_err(|e| FormatError::Other(e.to_string()))?;
            Ok(ParsedPattern {
                pattern: Pattern::Scenario(pattern),
                provenance,
            })
        }
    }
}

pub fn serialize_pattern(pattern: &Pattern, provenance: Option<&str>) -> String {
    let doc = match pattern {
        Pattern::Deterministic(p) => PatternDoc::Deterministic {
            values: p.values().iter().map(Rat::to_string).collect(),
            provenance: provenance.map(str::to_string),
        },
        Pattern::Scenario(p) => PatternDoc::Scenario {
            scenarios: p
                .scenarios()
                .iter()
                .map(|s| ScenarioDoc {
                    prob: s.probability.to_string(),
                    values: s.outcome.values().iter().map(Rat::to_string).collect(),
                })
                .collect(),
            provenance: provenance.map(str::to_string),
        },
    };
    serde_json::to_string_pretty(&doc).expect("pattern doc serializes")
}

#[derive(Serialize, Deserialize)]
struct StrategyDoc {
    memory: usize,
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    context: Vec<String>,
    action: i8,
}

pub fn parse_strategy(text: &str) -> Result<TabulatedStrategy, FormatError> {
    let doc: StrategyDoc =
        serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    let mut strategy = TabulatedStrategy::new(doc.memory)
        .map_err(|e| FormatError::Other(e.to_string()))?;
    for (i, entry) in doc.entries.iter().enumerate() {
        if !(-1..=1).contains(&entry.action) {
            return Err(FormatError::Other(format!(
                "entries[{i}]: action {} outside -1..=1",
                entry.action
            )));
        }
        if entry.context.len() != doc.memory {
            return Err(FormatError::Other(format!(
                "entries[{i}]: context length {} differs from memory {}",
                entry.context.len(),
                doc.memory
            )));
        }
        let window = parse_values(&entry.context, &format!("entries[{i}]."))?;
        strategy
            .set(Context::new(window), entry.action)
            .map_err(|e| FormatError::Other(e.to_string()))?;
    }
    Ok(strategy)
}

pub fn serialize_strategy(strategy: &TabulatedStrategy) -> String {
    let doc = StrategyDoc {
        memory: strategy.memory(),
        entries: strategy
            .entries()
            .map(|(context, action)| EntryDoc {
                context: context.values().iter().map(Rat::to_string).collect(),
                action,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("strategy doc serializes")
}
