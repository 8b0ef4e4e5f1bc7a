//! The market-evolution operator and its iteration.
//!
//! A strategy entering the market leaves its mark by subtraction: the
//! evolved block is `X_i − s(window before i)` position by position. Where
//! the strategy calls the sign correctly the return shrinks toward zero;
//! where it is wrong the return is pushed away — the seed of a bubble.
//!
//! For scenario patterns the first `m` positions look into the previous
//! independent block. The operator subtracts there only if the action is
//! the same for every realization of that block; otherwise the evolved
//! market has cross-block dependence, is no longer expressible as a
//! repeating pattern, and the operation fails with
//! [`Error::BoundaryDependent`] rather than approximating.

use std::collections::HashMap;

use crate::error::Error;
use crate::pattern::{
    cyclic_window, Context, DeterministicPattern, Pattern, Scenario, ScenarioPattern,
};
use crate::rational::Rat;
use crate::strategy::{gain, optimal_strategy, TabulatedStrategy};

/// Default bubble threshold: flag when the peak amplitude reaches 3/2 of
/// the initial amplitude.
pub fn default_theta() -> Rat {
    Rat::new(3, 2)
}

pub use crate::pattern::amplitude;

/// Applies one evolution to a deterministic block using cyclic windows.
pub fn evolve_deterministic(
    pattern: &DeterministicPattern,
    strategy: &TabulatedStrategy,
) -> DeterministicPattern {
    let memory = strategy.memory();
    let values = (1..=pattern.len())
        .map(|position| {
            let window = cyclic_window(pattern, position, memory).expect("position in range");
            let action = strategy.action(&window);
            pattern.value(position) - &Rat::from_int(action as i64)
        })
        .collect();
    DeterministicPattern::new(values).expect("length preserved")
}

/// Applies one evolution to a scenario block. Positions whose window stays
/// inside the current block subtract the action outright; boundary
/// positions require the action to agree across all previous-block draws.
pub fn evolve_scenario(
    pattern: &ScenarioPattern,
    strategy: &TabulatedStrategy,
) -> Result<ScenarioPattern, Error> {
    let memory = strategy.memory();
    let p = pattern.block_len();
    let scenarios = pattern.scenarios();
    let mut evolved = Vec::with_capacity(scenarios.len());
    for (current_idx, scenario) in scenarios.iter().enumerate() {
        let mut values = Vec::with_capacity(p);
        for position in 1..=p {
            let action = if position > memory {
                let window: Vec<Rat> = (position - memory..position)
                    .map(|j| scenario.outcome.value(j).clone())
                    .collect();
                strategy.action(&Context::new(window))
            } else {
                boundary_action(pattern, strategy, current_idx, position)?
            };
            values.push(scenario.outcome.value(position) - &Rat::from_int(action as i64));
        }
        evolved.push(Scenario {
            probability: scenario.probability.clone(),
            outcome: DeterministicPattern::new(values).expect("length preserved"),
        });
    }
    ScenarioPattern::new(evolved)
}

/// Action at a boundary position, provided it is the same for every
/// realization of the previous blocks the window reaches into.
fn boundary_action(
    pattern: &ScenarioPattern,
    strategy: &TabulatedStrategy,
    current_idx: usize,
    position: usize,
) -> Result<i8, Error> {
    let memory = strategy.memory();
    let p = pattern.block_len();
    let scenarios = pattern.scenarios();
    let back = memory - (position - 1);
    let blocks_back = back.div_ceil(p);

    let mut agreed: Option<i8> = None;
    let mut combo = vec![0usize; blocks_back];
    loop {
        let window = crate::pattern::materialize_window(
            scenarios,
            current_idx,
            &combo,
            position,
            memory,
        );
        let action = strategy.action(&window);
        match agreed {
            None => agreed = Some(action),
            Some(a) if a == action => {}
            Some(_) => return Err(Error::BoundaryDependent { position }),
        }
        if !crate::pattern::advance_odometer(&mut combo, scenarios.len()) {
            break;
        }
    }
    Ok(agreed.expect("at least one previous-block draw"))
}

/// One evolution of either pattern kind.
pub fn evolve(pattern: &Pattern, strategy: &TabulatedStrategy) -> Result<Pattern, Error> {
    match pattern {
        Pattern::Deterministic(p) => Ok(Pattern::Deterministic(evolve_deterministic(p, strategy))),
        Pattern::Scenario(p) => Ok(Pattern::Scenario(evolve_scenario(p, strategy)?)),
    }
}

/// One applied evolution: the strategy, what it acted on, what it left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionStep {
    pub memory: usize,
    pub strategy: TabulatedStrategy,
    pub before: Pattern,
    pub after: Pattern,
    pub gain: Rat,
    pub amplitude_before: Rat,
    pub amplitude_after: Rat,
}

/// How an iterated evolution ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Terminal {
    /// The schedule ran out.
    MaxSteps,
    /// The last evolution returned its input unchanged.
    FixedPoint,
    /// The latest pattern equals an earlier one.
    Cycle { length: usize, first_index: usize },
}

impl Terminal {
    pub fn label(&self) -> String {
        match self {
            Terminal::MaxSteps => "max-steps".to_string(),
            Terminal::FixedPoint => "fixed-point".to_string(),
            Terminal::Cycle {
                length,
                first_index,
            } => format!("cycle({length}@{first_index})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionTrajectory {
    pub initial: Pattern,
    pub steps: Vec<EvolutionStep>,
    pub terminal: Terminal,
}

impl EvolutionTrajectory {
    pub fn final_pattern(&self) -> &Pattern {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.initial)
    }

    /// The visited patterns in order: initial, then each step's result.
    pub fn pattern_chain(&self) -> Vec<&Pattern> {
        let mut chain = vec![&self.initial];
        chain.extend(self.steps.iter().map(|s| &s.after));
        chain
    }
}

/// Amplitude growth along a trajectory against a threshold ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BubbleReport {
    /// Amplitude of the initial pattern, then after each step.
    pub amplitudes: Vec<Rat>,
    /// Peak amplitude over initial amplitude; undefined for an all-zero
    /// initial pattern.
    pub peak_ratio: Option<Rat>,
    pub flagged: bool,
    pub threshold: Rat,
}

impl BubbleReport {
    pub fn new(amplitudes: Vec<Rat>, threshold: Rat) -> Self {
        let initial = amplitudes.first().cloned().unwrap_or_else(Rat::zero);
        let peak = amplitudes.iter().max().cloned().unwrap_or_else(Rat::zero);
        let peak_ratio = if initial.is_zero() {
            None
        } else {
            Some(&peak / &initial)
        };
        let flagged = peak_ratio
            .as_ref()
            .map(|r| *r >= threshold)
            .unwrap_or(false);
        BubbleReport {
            amplitudes,
            peak_ratio,
            flagged,
            threshold,
        }
    }
}

/// Knobs for [`iterate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterateOptions {
    pub theta: Rat,
    /// Keep applying the step-0 strategy instead of re-solving each step;
    /// the schedule then only sets how many times it is applied.
    pub freeze_first_strategy: bool,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions {
            theta: default_theta(),
            freeze_first_strategy: false,
        }
    }
}

/// Repeated optimal evolution under a memory schedule. A constant schedule
/// models one agent acting again and again; a mixed schedule models agents
/// of different memory entering one after another. Stops at the end of the
/// schedule, at a fixed point, or on the first repeated pattern.
pub fn iterate(
    pattern: &Pattern,
    schedule: &[usize],
    options: &IterateOptions,
) -> Result<(EvolutionTrajectory, BubbleReport), Error> {
    if schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if schedule.contains(&0) {
        return Err(Error::ZeroMemory);
    }

    let mut seen: HashMap<Pattern, usize> = HashMap::new();
    seen.insert(pattern.canonicalized(), 0);
    let mut amplitudes = vec![pattern.amplitude()];
    let mut steps = Vec::new();
    let mut current = pattern.clone();
    let mut terminal = Terminal::MaxSteps;

    for (index, &memory) in schedule.iter().enumerate() {
        let strategy = if options.freeze_first_strategy && index > 0 {
            steps
                .first()
                .map(|s: &EvolutionStep| s.strategy.clone())
                .expect("step 0 recorded")
        } else {
            optimal_strategy(&current, memory)?
        };
        let after = evolve(&current, &strategy)?;
        let step_gain = gain(&strategy, &current)?.gain;
        amplitudes.push(after.amplitude());
        steps.push(EvolutionStep {
            memory: strategy.memory(),
            strategy,
            before: current.clone(),
            after: after.clone(),
            gain: step_gain,
            amplitude_before: current.amplitude(),
            amplitude_after: after.amplitude(),
        });

        let key = after.canonicalized();
        let this_index = steps.len();
        if let Some(&first_index) = seen.get(&key) {
            terminal = if first_index + 1 == this_index {
                Terminal::FixedPoint
            } else {
                Terminal::Cycle {
                    length: this_index - first_index,
                    first_index,
                }
            };
            break;
        }
        seen.insert(key, this_index);
        current = after;
    }

    let report = BubbleReport::new(amplitudes, options.theta.clone());
    Ok((
        EvolutionTrajectory {
            initial: pattern.clone(),
            steps,
            terminal,
        },
        report,
    ))
}

/// Classifies a realized chain of patterns by exact equality (scenario
/// patterns compare as canonical distributions). The chain is scanned for
/// its first repeat; with none, the verdict is [`Terminal::MaxSteps`].
pub fn detect_cycle(chain: &[Pattern]) -> Terminal {
    let mut seen: HashMap<Pattern, usize> = HashMap::new();
    for (index, pattern) in chain.iter().enumerate() {
        let key = pattern.canonicalized();
        if let Some(&first_index) = seen.get(&key) {
            return if first_index + 1 == index {
                Terminal::FixedPoint
            } else {
                Terminal::Cycle {
                    length: index - first_index,
                    first_index,
                }
            };
        }
        seen.insert(key, index);
    }
    Terminal::MaxSteps
}
