//! Market patterns and the windows strategies observe.
//!
//! A market is the independent repetition of one finite block of returns.
//! [`DeterministicPattern`] is the block with every coordinate fixed;
//! [`ScenarioPattern`] is a finite weighted set of equal-length outcomes,
//! one of which is drawn independently for every repetition. Positions are
//! 1-based throughout, matching the usual time indexing of the block.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::Integer;

use crate::error::{Error, Violation};
use crate::rational::Rat;

/// A finite block of fixed returns; the market repeats it forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicPattern {
    values: Vec<Rat>,
}

impl DeterministicPattern {
    pub fn new(values: Vec<Rat>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyPattern);
        }
        Ok(DeterministicPattern { values })
    }

    /// Convenience for integer-valued blocks. Panics on an empty slice.
    pub fn from_ints(values: &[i64]) -> Self {
        DeterministicPattern::new(values.iter().map(|&v| Rat::from_int(v)).collect())
            .expect("non-empty integer pattern")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length ≥ 1 by construction
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Value at a 1-based position.
    pub fn value(&self, position: usize) -> &Rat {
        &self.values[position - 1]
    }

    pub fn amplitude(&self) -> Rat {
        self.values
            .iter()
            .map(Rat::abs)
            .max()
            .expect("non-empty pattern")
    }

    pub fn negated(&self) -> Self {
        DeterministicPattern {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        DeterministicPattern {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(Rat::is_zero)
    }

    pub fn is_sign_valued(&self) -> bool {
        self.values
            .iter()
            .all(|v| *v == Rat::one() || *v == Rat::from_int(-1))
    }
}

/// The last `m` realized returns before some position, oldest first.
/// Exact value equality makes contexts usable as lookup keys.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context(Vec<Rat>);

impl Context {
    pub fn new(window: Vec<Rat>) -> Self {
        Context(window)
    }

    pub fn from_ints(window: &[i64]) -> Self {
        Context(window.iter().map(|&v| Rat::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    /// The most recent observation in the window.
    pub fn latest(&self) -> &Rat {
        self.0.last().expect("memory ≥ 1")
    }

    pub fn negated(&self) -> Self {
        Context(self.0.iter().map(|v| -v).collect())
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        Context(self.0.iter().map(|v| v * factor).collect())
    }
}

/// One possible realization of a pattern block, with its probability.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scenario {
    pub probability: Rat,
    pub outcome: DeterministicPattern,
}

/// A pattern block given extensionally as a weighted set of equal-length
/// outcomes. Each repetition of the block draws one scenario independently.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScenarioPattern {
    scenarios: Vec<Scenario>,
}

impl ScenarioPattern {
    pub fn new(scenarios: Vec<Scenario>) -> Result<Self, Error> {
        let violations = Self::check(&scenarios);
        if violations.is_empty() {
            Ok(ScenarioPattern { scenarios })
        } else {
            Err(Error::InvalidScenarioPattern(crate::error::Violations(
                violations,
            )))
        }
    }

    /// Diagnostic validation: reports every violation rather than the first.
    pub fn check(scenarios: &[Scenario]) -> Vec<Violation> {
        let mut violations = Vec::new();
        if scenarios.is_empty() {
            violations.push(Violation::NoScenarios);
            return violations;
        }
        let expected = scenarios[0].outcome.len();
        let mut sum = Rat::zero();
        for (index, scenario) in scenarios.iter().enumerate() {
            // Outcomes are non-empty by construction; only lengths can differ.
            if scenario.outcome.len() != expected {
                violations.push(Violation::UnequalLength {
                    scenario: index,
                    expected,
                    found: scenario.outcome.len(),
                });
            }
            if !scenario.probability.is_positive() || scenario.probability > Rat::one() {
                violations.push(Violation::ProbabilityOutOfRange {
                    scenario: index,
                    probability: scenario.probability.to_string(),
                });
            }
            sum += &scenario.probability;
        }
        if sum != Rat::one() {
            violations.push(Violation::ProbabilitySum {
                sum: sum.to_string(),
            });
        }
        violations
    }

    /// Wraps a deterministic block as the single scenario of probability 1.
    pub fn singleton(outcome: DeterministicPattern) -> Self {
        ScenarioPattern {
            scenarios: vec![Scenario {
                probability: Rat::one(),
                outcome,
            }],
        }
    }

    pub fn scenarios(&self) -> &[Scenario] {
        &self.scenarios
    }

    pub fn block_len(&self) -> usize {
        self.scenarios[0].outcome.len()
    }

    pub fn amplitude(&self) -> Rat {
        self.scenarios
            .iter()
            .map(|s| s.outcome.amplitude())
            .max()
            .expect("non-empty scenario list")
    }

    pub fn negated(&self) -> Self {
        ScenarioPattern {
            scenarios: self
                .scenarios
                .iter()
                .map(|s| Scenario {
                    probability: s.probability.clone(),
                    outcome: s.outcome.negated(),
                })
                .collect(),
        }
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        ScenarioPattern {
            scenarios: self
                .scenarios
                .iter()
                .map(|s| Scenario {
                    probability: s.probability.clone(),
                    outcome: s.outcome.scaled(factor),
                })
                .collect(),
        }
    }

    /// Distribution-level normal form: outcomes sorted, duplicates merged.
    /// Two patterns describe the same block law iff their canonical forms
    /// are equal; cycle detection compares these.
    pub fn canonicalized(&self) -> Self {
        let mut merged: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
        for s in &self.scenarios {
            let entry = merged
                .entry(s.outcome.values().to_vec())
                .or_insert_with(Rat::zero);
            *entry += &s.probability;
        }
        ScenarioPattern {
            scenarios: merged
                .into_iter()
                .map(|(values, probability)| Scenario {
                    probability,
                    outcome: DeterministicPattern { values },
                })
                .collect(),
        }
    }
}

/// Either form of a market pattern block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Deterministic(DeterministicPattern),
    Scenario(ScenarioPattern),
}

impl Pattern {
    pub fn block_len(&self) -> usize {
        match self {
            Pattern::Deterministic(p) => p.len(),
            Pattern::Scenario(p) => p.block_len(),
        }
    }

    pub fn amplitude(&self) -> Rat {
        match self {
            Pattern::Deterministic(p) => p.amplitude(),
            Pattern::Scenario(p) => p.amplitude(),
        }
    }

    pub fn negated(&self) -> Self {
        match self {
            Pattern::Deterministic(p) => Pattern::Deterministic(p.negated()),
            Pattern::Scenario(p) => Pattern::Scenario(p.negated()),
        }
    }

    pub fn scaled(&self, factor: &Rat) -> Self {
        match self {
            Pattern::Deterministic(p) => Pattern::Deterministic(p.scaled(factor)),
            Pattern::Scenario(p) => Pattern::Scenario(p.scaled(factor)),
        }
    }

    pub fn canonicalized(&self) -> Self {
        match self {
            Pattern::Deterministic(_) => self.clone(),
            Pattern::Scenario(p) => Pattern::Scenario(p.canonicalized()),
        }
    }

    pub fn as_deterministic(&self) -> Option<&DeterministicPattern> {
        match self {
            Pattern::Deterministic(p) => Some(p),
            Pattern::Scenario(_) => None,
        }
    }
}

impl From<DeterministicPattern> for Pattern {
    fn from(p: DeterministicPattern) -> Self {
        Pattern::Deterministic(p)
    }
}

impl From<ScenarioPattern> for Pattern {
    fn from(p: ScenarioPattern) -> Self {
        Pattern::Scenario(p)
    }
}

/// Maximum absolute return over the block (over every scenario outcome in
/// the randomized case).
pub fn amplitude(pattern: &Pattern) -> Rat {
    pattern.amplitude()
}

/// The `memory` values preceding `position`, indices taken cyclically into
/// the same block. For a deterministic pattern the previous independent
/// block is the same constants, so wrapping is exact; `memory` may exceed
/// the block length (multiple wraps).
pub fn cyclic_window(
    pattern: &DeterministicPattern,
    position: usize,
    memory: usize,
) -> Result<Context, Error> {
    if memory == 0 {
        return Err(Error::ZeroMemory);
    }
    let p = pattern.len();
    if position == 0 || position > p {
        return Err(Error::PositionOutOfRange {
            position,
            length: p,
        });
    }
    let mut window = Vec::with_capacity(memory);
    // 1-based indices position-memory ..= position-1, folded into 0..p.
    for offset in (1..=memory).rev() {
        let idx = (position as i64 - 1 - offset as i64).rem_euclid(p as i64) as usize;
        window.push(pattern.values()[idx].clone());
    }
    Ok(Context::new(window))
}

/// Running price series implied by a pattern of returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PricePath {
    prices: Vec<Rat>,
}

impl PricePath {
    pub fn start(&self) -> &Rat {
        &self.prices[0]
    }

    /// All prices including the starting one; length is block length + 1.
    pub fn prices(&self) -> &[Rat] {
        &self.prices
    }
}

/// Integrates returns into prices: `prices[t] = start + Σ_{i≤t} values[i]`.
pub fn price_path(pattern: &DeterministicPattern, start: Rat) -> PricePath {
    let mut prices = Vec::with_capacity(pattern.len() + 1);
    prices.push(start);
    for v in pattern.values() {
        let next = prices.last().expect("non-empty") + v;
        prices.push(next);
    }
    PricePath { prices }
}

/// One realized window of the repeated market: the context observed before
/// `position`, the return there, and the joint probability of the blocks
/// the window spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSample {
    pub position: usize,
    pub context: Context,
    pub target: Rat,
    pub probability: Rat,
}

/// Enumerates every realized (context, target) pair of the repeated market,
/// position by position. Entries with index ≤ 0 draw from previous
/// independent blocks; when `memory ≥ block length` the window wraps across
/// several of them, and the probability is the product over however many
/// blocks the window touches. Per position, probabilities sum to 1.
pub fn enumerate_windows(
    pattern: &ScenarioPattern,
    memory: usize,
) -> Result<Vec<WindowSample>, Error> {
    if memory == 0 {
        return Err(Error::ZeroMemory);
    }
    let p = pattern.block_len();
    let scenarios = pattern.scenarios();
    let mut samples = Vec::new();
    for position in 1..=p {
        let back = memory.saturating_sub(position - 1); // entries before index 1
        let blocks_back = back.div_ceil(p);
        let mut combo = vec![0usize; blocks_back];
        loop {
            for (current_idx, current) in scenarios.iter().enumerate() {
                let mut probability = current.probability.clone();
                for &b in &combo {
                    probability = &probability * &scenarios[b].probability;
                }
                let context = materialize_window(scenarios, current_idx, &combo, position, memory);
                samples.push(WindowSample {
                    position,
                    context,
                    target: current.outcome.value(position).clone(),
                    probability,
                });
            }
            if !advance_odometer(&mut combo, scenarios.len()) {
                break;
            }
        }
    }
    Ok(samples)
}

/// Builds the window before `position` given the current scenario and the
/// scenarios of the blocks behind it (`combo[0]` is the block immediately
/// before the current one).
pub(crate) fn materialize_window(
    scenarios: &[Scenario],
    current: usize,
    combo: &[usize],
    position: usize,
    memory: usize,
) -> Context {
    let p = scenarios[0].outcome.len();
    let mut window = Vec::with_capacity(memory);
    for offset in (1..=memory).rev() {
        let j = position as i64 - offset as i64; // 1-based, may be ≤ 0
        if j >= 1 {
            window.push(scenarios[current].outcome.value(j as usize).clone());
        } else {
            let back = (1 - j) as usize; // how many entries before index 1
            let depth = (back - 1) / p; // 0 = immediately previous block
            let pos_in_block = p - (back - 1) % p;
            window.push(scenarios[combo[depth]].outcome.value(pos_in_block).clone());
        }
    }
    Context::new(window)
}

/// Steps `combo` through base-`radix` odometer order; false when wrapped.
pub(crate) fn advance_odometer(combo: &mut [usize], radix: usize) -> bool {
    for digit in combo.iter_mut() {
        *digit += 1;
        if *digit < radix {
            return true;
        }
        *digit = 0;
    }
    false
}

/// Least common multiple of all scenario probability denominators; the
/// grid on which the block distribution lives.
pub fn probability_denominator(pattern: &ScenarioPattern) -> BigInt {
    let mut d = BigInt::from(1);
    for s in pattern.scenarios() {
        d = d.lcm(s.probability.denom());
    }
    d
}
