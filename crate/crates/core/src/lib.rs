//! Exact-arithmetic engine for memory-bounded trading on repeating markets.
//!
//! The model: a market is the independent repetition of a finite block of
//! returns; a memory-`m` strategy maps the previous `m` returns to an
//! action in {−1, 0, +1}; its gain over the block is the expected sum of
//! `sign(action · next return)`. A block is *efficient* at memory `m` when
//! no such strategy has positive gain. Strategies act back on the market by
//! subtraction, which is the evolution operator: correct calls shrink
//! returns toward zero, wrong ones push them away, and iterating the
//! optimal strategy can blow isolated returns up into bubbles or hand
//! larger profits to agents with more memory.
//!
//! Everything is computed in exact rational arithmetic — gains, weights,
//! probabilities, thresholds — so results are compared by equality, never
//! by tolerance.
//!
//! ```
//! use patmark_core::*;
//!
//! // An alternating block with one amplified kick at the end.
//! let block = Pattern::Deterministic(DeterministicPattern::from_ints(
//!     &[-2, 2, -2, 2, -2, 2, 3],
//! ));
//!
//! // The best memory-2 table earns 5 per block...
//! assert_eq!(optimal_gain(&block, 2).unwrap(), Rat::from_int(5));
//!
//! // ...and applying it twice drives the market into a one-spike bubble.
//! let (trajectory, bubble) = iterate(&block, &[2, 2], &IterateOptions::default()).unwrap();
//! assert_eq!(
//!     trajectory.final_pattern(),
//!     &Pattern::Deterministic(DeterministicPattern::from_ints(&[0, 0, 0, 0, 0, 0, 5])),
//! );
//! assert_eq!(bubble.peak_ratio, Some(Rat::new(5, 3)));
//! assert!(bubble.flagged);
//! ```

pub mod analytics;
pub mod constructions;
pub mod error;
pub mod evolution;
pub mod oracle;
pub mod pattern;
pub mod rational;
pub mod rng;
pub mod strategy;

pub use analytics::{
    autocorr1, compare_gain_autocorr, random_pattern, sweep, GainAutocorrComparison,
    RatioHistogram, SweepConfig, SweepItem, SweepReport,
};
pub use constructions::{
    expand_to_deterministic, fair_coin, feedoff_pattern, feedoff_report, figure_pattern,
    parity_pattern, ExpansionOrder, FeedoffParams, FeedoffReport, DEFAULT_SCENARIO_CAP,
    FIGURE_NAMES,
};
pub use error::{Error, Violation, Violations};
pub use evolution::{
    amplitude, default_theta, detect_cycle, evolve, evolve_deterministic, evolve_scenario,
    iterate, BubbleReport, EvolutionStep, EvolutionTrajectory, IterateOptions, Terminal,
};
pub use oracle::{brute_force_optimal_gain, definition_gain, DEFAULT_TABLE_CAP};
pub use pattern::{
    cyclic_window, enumerate_windows, price_path, Context, DeterministicPattern, Pattern,
    PricePath, Scenario, ScenarioPattern, WindowSample,
};
pub use rational::{sign, ParseRatError, Rat};
pub use rng::SplitMix64;
pub use strategy::{
    context_weights, gain, is_efficient, min_inefficient_memory, optimal_gain, optimal_strategy,
    ContextWeights, GainReport, TabulatedStrategy,
};
