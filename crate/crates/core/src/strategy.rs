//! Strategies, gains, and the optimal-strategy solver.
//!
//! A memory-`m` strategy maps each window of the `m` previous returns to an
//! action in {−1, 0, +1}: buy-and-sell, abstain, or sell-and-buy. Its gain
//! over one block is the expected sum of `sign(action · next return)` across
//! positions. Because actions live in {−1, 0, +1}, the gain of any strategy
//! collapses to `Σ_c s(c) · w(c)` where `w(c)` is the probability-weighted
//! tally of next-return signs over occurrences of context `c`. The solver
//! therefore plays `sign(w(c))` at every context and earns `Σ_c |w(c)|`.
//!
//! Ties (`w(c) = 0`) and unobserved contexts get action 0, so among all
//! gain maximizers the solver returns the one that trades least; efficient
//! patterns map to the all-zero strategy and are fixed points of evolution.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::pattern::{cyclic_window, enumerate_windows, Context, Pattern};
use crate::rational::Rat;

/// Finitely supported strategy table. Contexts absent from the table map
/// to action 0; zero actions are never stored, so `len` counts trades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabulatedStrategy {
    memory: usize,
    table: BTreeMap<Context, i8>,
}

impl TabulatedStrategy {
    pub fn new(memory: usize) -> Result<Self, Error> {
        if memory == 0 {
            return Err(Error::ZeroMemory);
        }
        Ok(TabulatedStrategy {
            memory,
            table: BTreeMap::new(),
        })
    }

    pub fn with_entries<I>(memory: usize, entries: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Context, i8)>,
    {
        let mut s = TabulatedStrategy::new(memory)?;
        for (context, action) in entries {
            s.set(context, action)?;
        }
        Ok(s)
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Sets the action for a context; action 0 clears the entry.
    pub fn set(&mut self, context: Context, action: i8) -> Result<(), Error> {
        if context.len() != self.memory {
            return Err(Error::PositionOutOfRange {
                position: context.len(),
                length: self.memory,
            });
        }
        assert!((-1..=1).contains(&action), "action outside {{-1,0,1}}");
        if action == 0 {
            self.table.remove(&context);
        } else {
            self.table.insert(context, action);
        }
        Ok(())
    }

    pub fn action(&self, context: &Context) -> i8 {
        self.table.get(context).copied().unwrap_or(0)
    }

    /// Stored (context, action) pairs in context order; all actions nonzero.
    pub fn entries(&self) -> impl Iterator<Item = (&Context, i8)> {
        self.table.iter().map(|(c, &a)| (c, a))
    }

    /// Number of contexts with a nonzero action, i.e. how much it trades.
    pub fn trade_count(&self) -> usize {
        self.table.len()
    }

    pub fn is_all_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// The strategy `s'(c) = -s(-c)`, which plays the mirrored market.
    pub fn negated_mirror(&self) -> Self {
        TabulatedStrategy {
            memory: self.memory,
            table: self
                .table
                .iter()
                .map(|(c, &a)| (c.negated(), -a))
                .collect(),
        }
    }
}

/// Per-context tallies `w(c) = Σ prob · sign(next return)` over every
/// occurrence of `c` in the repeated market. Observed contexts with a zero
/// tally are kept: they are exactly the ties the solver declines to trade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextWeights {
    memory: usize,
    weights: BTreeMap<Context, Rat>,
}

impl ContextWeights {
    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn get(&self, context: &Context) -> Rat {
        self.weights
            .get(context)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Context, &Rat)> {
        self.weights.iter()
    }

    pub fn all_zero(&self) -> bool {
        self.weights.values().all(Rat::is_zero)
    }

    /// `Σ_c |w(c)|`: the gain of the sign-playing strategy.
    pub fn total_absolute(&self) -> Rat {
        self.weights.values().map(Rat::abs).sum()
    }
}

/// Computes the context weights of a pattern at the given memory.
///
/// Deterministic blocks use cyclic windows (the previous independent block
/// being the same constants) and tally `sign(X_i)` per occurrence; scenario
/// blocks enumerate realized windows across adjacent independent blocks and
/// tally probability-weighted signs.
pub fn context_weights(pattern: &Pattern, memory: usize) -> Result<ContextWeights, Error> {
    if memory == 0 {
        return Err(Error::ZeroMemory);
    }
    let mut weights: BTreeMap<Context, Rat> = BTreeMap::new();
    match pattern {
        Pattern::Deterministic(p) => {
            for position in 1..=p.len() {
                let context = cyclic_window(p, position, memory)?;
                let entry = weights.entry(context).or_insert_with(Rat::zero);
                *entry += &Rat::from_int(p.value(position).sign() as i64);
            }
        }
        Pattern::Scenario(p) => {
            for sample in enumerate_windows(p, memory)? {
                let entry = weights.entry(sample.context).or_insert_with(Rat::zero);
                *entry += &(&sample.probability * &Rat::from_int(sample.target.sign() as i64));
            }
        }
    }
    Ok(ContextWeights { memory, weights })
}

/// Gain of a strategy over one pattern block, with the per-context
/// breakdown `contribution(c) = s(c) · w(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GainReport {
    pub gain: Rat,
    pub contributions: BTreeMap<Context, Rat>,
}

pub fn gain(strategy: &TabulatedStrategy, pattern: &Pattern) -> Result<GainReport, Error> {
    let weights = context_weights(pattern, strategy.memory())?;
    let mut contributions = BTreeMap::new();
    let mut total = Rat::zero();
    for (context, weight) in weights.iter() {
        let action = strategy.action(context);
        let contribution = weight * &Rat::from_int(action as i64);
        total += &contribution;
        contributions.insert(context.clone(), contribution);
    }
    Ok(GainReport {
        gain: total,
        contributions,
    })
}

/// The gain-maximizing strategy that trades least: action `sign(w(c))` at
/// every observed context, 0 on ties and off-table.
pub fn optimal_strategy(pattern: &Pattern, memory: usize) -> Result<TabulatedStrategy, Error> {
    let weights = context_weights(pattern, memory)?;
    let mut strategy = TabulatedStrategy::new(memory)?;
    for (context, weight) in weights.iter() {
        let action = weight.sign();
        if action != 0 {
            strategy.set(context.clone(), action)?;
        }
    }
    Ok(strategy)
}

/// `Σ_c |w(c)|`, the best gain any memory-`memory` strategy achieves.
pub fn optimal_gain(pattern: &Pattern, memory: usize) -> Result<Rat, Error> {
    Ok(context_weights(pattern, memory)?.total_absolute())
}

/// A pattern is efficient at a memory iff no strategy with that memory has
/// strictly positive gain. The all-zero strategy guarantees the optimum is
/// ≥ 0, so this is equivalent to the optimum being exactly 0.
pub fn is_efficient(pattern: &Pattern, memory: usize) -> Result<bool, Error> {
    Ok(optimal_gain(pattern, memory)?.is_zero())
}

/// First memory in `1..=max_memory` at which the pattern stops being
/// efficient, if any.
pub fn min_inefficient_memory(
    pattern: &Pattern,
    max_memory: usize,
) -> Result<Option<usize>, Error> {
    for memory in 1..=max_memory {
        if !is_efficient(pattern, memory)? {
            return Ok(Some(memory));
        }
    }
    Ok(None)
}
