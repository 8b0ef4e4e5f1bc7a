//! Generators for the named pattern families.
//!
//! These are the worked objects of the model: the fair coin, the parity
//! family (efficient at one memory, exploitable one step higher), the
//! feed-off family (where a low-memory agent's evolution hands a
//! high-memory agent its profit), the two fixed figure blocks, and the
//! expansion of a randomized block into the deterministic block that plays
//! out all its combinations.

use num::ToPrimitive;

use crate::error::Error;
use crate::evolution::evolve_scenario;
use crate::pattern::{
    probability_denominator, DeterministicPattern, Pattern, Scenario, ScenarioPattern,
};
use crate::rational::Rat;
use crate::rng::SplitMix64;
use crate::strategy::{gain, optimal_gain, optimal_strategy};

/// Default budget on scenario count × block length for generated patterns.
pub const DEFAULT_SCENARIO_CAP: u64 = 1 << 20;

/// The one-position block whose return is ±1 with probability 1/2 each:
/// efficient with respect to every memory.
pub fn fair_coin() -> ScenarioPattern {
    ScenarioPattern::new(vec![
        Scenario {
            probability: Rat::new(1, 2),
            outcome: DeterministicPattern::from_ints(&[1]),
        },
        Scenario {
            probability: Rat::new(1, 2),
            outcome: DeterministicPattern::from_ints(&[-1]),
        },
    ])
    .expect("fair coin is valid")
}

/// A symbolic block entry: `coeff · Π` of the ±1 variables in `vars`.
#[derive(Clone)]
struct Term {
    coeff: Rat,
    vars: u64,
}

/// Expands symbolic entries over all assignments of `n_vars` fair ±1
/// variables into equiprobable scenarios. Assignment order puts variable 0
/// most significant with +1 before −1, so index 0 is the all-plus draw.
fn expand_terms(terms: &[Term], n_vars: usize, cap: u64) -> Result<ScenarioPattern, Error> {
    let count = 1u128 << n_vars;
    let required = count * terms.len() as u128;
    if required > cap as u128 {
        return Err(Error::ScenarioCapExceeded { required, cap });
    }
    let probability = Rat::from_big(1.into(), num::bigint::BigInt::from(2).pow(n_vars as u32));
    let mut scenarios = Vec::with_capacity(count as usize);
    for idx in 0..count as u64 {
        let sign_of = |var: usize| -> i64 {
            if idx >> (n_vars - 1 - var) & 1 == 0 {
                1
            } else {
                -1
            }
        };
        let values = terms
            .iter()
            .map(|t| {
                let mut sign = 1i64;
                for var in 0..n_vars {
                    if t.vars >> var & 1 == 1 {
                        sign *= sign_of(var);
                    }
                }
                &t.coeff * &Rat::from_int(sign)
            })
            .collect();
        scenarios.push(Scenario {
            probability: probability.clone(),
            outcome: DeterministicPattern::new(values).expect("terms non-empty"),
        });
    }
    ScenarioPattern::new(scenarios)
}

/// The parity block for a given memory: `memory + 1` independent fair ±1
/// returns followed by their product. Every return is independent of the
/// `memory` before it, so the block is efficient at that memory, while one
/// more unit of memory reads the product off and earns exactly 1.
pub fn parity_pattern(memory: usize) -> Result<ScenarioPattern, Error> {
    parity_pattern_capped(memory, DEFAULT_SCENARIO_CAP)
}

pub fn parity_pattern_capped(memory: usize, cap: u64) -> Result<ScenarioPattern, Error> {
    if memory == 0 {
        return Err(Error::ZeroMemory);
    }
    let n_vars = memory + 1;
    if n_vars > 40 {
        return Err(Error::ScenarioCapExceeded {
            required: u128::MAX,
            cap,
        });
    }
    let mut terms: Vec<Term> = (0..n_vars)
        .map(|k| Term {
            coeff: Rat::one(),
            vars: 1 << k,
        })
        .collect();
    terms.push(Term {
        coeff: Rat::one(),
        vars: (1 << n_vars) - 1,
    });
    expand_terms(&terms, n_vars, cap)
}

/// Parameters of the feed-off family. The two memories pick the agents;
/// the four magnitudes mark block positions so that windows ending on them
/// are recognizable: `low_marker` cues the low-memory agent's one
/// predictable entry, `high_marker` cues the entry only the high-memory
/// agent can read, `payoff` scales the predictable entries themselves, and
/// `mask` scales the pair of entries whose contributions cancel until the
/// low-memory agent breaks the symmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedoffParams {
    pub memory_low: usize,
    pub memory_high: usize,
    pub low_marker: Rat,
    pub high_marker: Rat,
    pub payoff: Rat,
    pub mask: Rat,
}

impl FeedoffParams {
    pub fn new(memory_low: usize, memory_high: usize) -> Self {
        FeedoffParams {
            memory_low,
            memory_high,
            low_marker: Rat::from_int(10),
            high_marker: Rat::from_int(20),
            payoff: Rat::from_int(30),
            mask: Rat::from_int(40),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.memory_low < 1 || self.memory_low >= self.memory_high {
            return Err(Error::InvalidFeedoffParams(format!(
                "memories must satisfy 1 ≤ low < high, got {} and {}",
                self.memory_low, self.memory_high
            )));
        }
        let magnitudes = [
            self.low_marker.abs(),
            self.high_marker.abs(),
            self.payoff.abs(),
            self.mask.abs(),
        ];
        for m in &magnitudes {
            if *m <= Rat::one() {
                return Err(Error::InvalidFeedoffParams(
                    "marker magnitudes must exceed 1".to_string(),
                ));
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if magnitudes[i] == magnitudes[j] {
                    return Err(Error::InvalidFeedoffParams(
                        "marker magnitudes must be pairwise distinct".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The feed-off block. With `m = memory_low`, `m' = memory_high`, over
/// independent fair ±1 variables `X_1..X_{m'}` and `Y_2..Y_{m'}`, the block
/// is the concatenation of
///
/// ```text
/// X_1, …, X_{m-1},  low·X_m,   payoff·ΠX_{1..m},  Y_2, …, Y_{m'-1}, mask·Y_{m'},  ΠX_{1..m}·ΠY_{2..m'},
/// X_1, …, X_{m'-1}, high·X_{m'}, payoff·ΠX_{1..m'}, Y_2, …, Y_{m'-1}, mask·Y_{m'}, −ΠX_{1..m'}·ΠY_{2..m'}
/// ```
///
/// The two mask-flanked products cancel each other's predictability until
/// an evolution dents one payoff entry and breaks the symmetry.
pub fn feedoff_pattern(params: &FeedoffParams) -> Result<ScenarioPattern, Error> {
    feedoff_pattern_capped(params, DEFAULT_SCENARIO_CAP)
}

pub fn feedoff_pattern_capped(
    params: &FeedoffParams,
    cap: u64,
) -> Result<ScenarioPattern, Error> {
    params.validate()?;
    let low = params.memory_low;
    let high = params.memory_high;
    let n_vars = 2 * high - 1; // X_1..X_high, Y_2..Y_high
    if n_vars > 40 {
        return Err(Error::ScenarioCapExceeded {
            required: u128::MAX,
            cap,
        });
    }
    let x_bit = |i: usize| 1u64 << (i - 1); // X_i, 1-based
    let y_bit = |i: usize| 1u64 << (high + i - 2); // Y_i, i ≥ 2
    let x_prod = |upto: usize| (1..=upto).fold(0u64, |acc, i| acc | x_bit(i));
    let y_prod = (2..=high).fold(0u64, |acc, i| acc | y_bit(i));

    let mut terms = Vec::new();
    let mut half = |prefix_len: usize, marker: &Rat, flip_final: bool| {
        for i in 1..prefix_len {
            terms.push(Term {
                coeff: Rat::one(),
                vars: x_bit(i),
            });
        }
        terms.push(Term {
            coeff: marker.clone(),
            vars: x_bit(prefix_len),
        });
        terms.push(Term {
            coeff: params.payoff.clone(),
            vars: x_prod(prefix_len),
        });
        for i in 2..high {
            terms.push(Term {
                coeff: Rat::one(),
                vars: y_bit(i),
            });
        }
        terms.push(Term {
            coeff: params.mask.clone(),
            vars: y_bit(high),
        });
        terms.push(Term {
            coeff: if flip_final {
                -Rat::one()
            } else {
                Rat::one()
            },
            vars: x_prod(prefix_len) | y_prod,
        });
    };
    half(low, &params.low_marker.clone(), false);
    half(high, &params.high_marker.clone(), true);

    debug_assert_eq!(terms.len(), (low + high + 1) + (2 * high + 1));
    expand_terms(&terms, n_vars, cap)
}

/// The five gains the feed-off comparison rests on, all exact. The family
/// exists to make `gain_high_on_low_evolved` strictly the largest of the
/// comparable values: the low-memory agent's action creates profit for the
/// high-memory agent that neither the untouched market nor a high-memory
/// first mover offers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedoffReport {
    pub params: FeedoffParams,
    /// Gain of the optimal low-memory strategy on the base block.
    pub gain_low_on_base: Rat,
    /// Gain of the optimal high-memory strategy on the base block.
    pub gain_high_on_base: Rat,
    /// Best high-memory gain on the block the low-memory agent left.
    pub gain_high_on_low_evolved: Rat,
    /// Best low-memory gain on that same block.
    pub gain_low_on_low_evolved: Rat,
    /// Best high-memory gain after a high-memory agent moved first.
    pub gain_high_on_high_evolved: Rat,
    pub inequality_holds: bool,
}

pub fn feedoff_report(params: &FeedoffParams) -> Result<FeedoffReport, Error> {
    let base = Pattern::Scenario(feedoff_pattern(params)?);
    let low = optimal_strategy(&base, params.memory_low)?;
    let high = optimal_strategy(&base, params.memory_high)?;

    let base_scenario = match &base {
        Pattern::Scenario(p) => p,
        Pattern::Deterministic(_) => unreachable!(),
    };
    let low_evolved = Pattern::Scenario(evolve_scenario(base_scenario, &low)?);
    let high_evolved = Pattern::Scenario(evolve_scenario(base_scenario, &high)?);

    let gain_low_on_base = gain(&low, &base)?.gain;
    let gain_high_on_base = gain(&high, &base)?.gain;
    let gain_high_on_low_evolved = optimal_gain(&low_evolved, params.memory_high)?;
    let gain_low_on_low_evolved = optimal_gain(&low_evolved, params.memory_low)?;
    let gain_high_on_high_evolved = optimal_gain(&high_evolved, params.memory_high)?;

    let inequality_holds = gain_high_on_low_evolved > gain_high_on_base
        && gain_high_on_low_evolved > gain_low_on_low_evolved
        && gain_high_on_low_evolved > gain_high_on_high_evolved;

    Ok(FeedoffReport {
        params: params.clone(),
        gain_low_on_base,
        gain_high_on_base,
        gain_high_on_low_evolved,
        gain_low_on_low_evolved,
        gain_high_on_high_evolved,
        inequality_holds,
    })
}

/// How [`expand_to_deterministic`] arranges the replicated outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpansionOrder {
    /// Scenario order, each outcome replicated in place.
    Identity,
    /// Explicit permutation of the replica list.
    Permutation(Vec<usize>),
    /// Seeded shuffle of the replica list.
    Seeded(u64),
}

/// Concatenates the scenario outcomes, each replicated in proportion to its
/// probability over the common denominator, into one deterministic block
/// that plays out all combinations.
///
/// No gain equivalence with the randomized block is claimed: windows that
/// straddle two replicas see value combinations the randomized block never
/// shows a single strategy, so the two optima are computed separately and
/// may differ.
pub fn expand_to_deterministic(
    pattern: &ScenarioPattern,
    order: &ExpansionOrder,
) -> Result<DeterministicPattern, Error> {
    expand_to_deterministic_capped(pattern, order, DEFAULT_SCENARIO_CAP)
}

pub fn expand_to_deterministic_capped(
    pattern: &ScenarioPattern,
    order: &ExpansionOrder,
    cap: u64,
) -> Result<DeterministicPattern, Error> {
    let p = pattern.block_len();
    let denom = probability_denominator(pattern);
    let replicas_total = denom.to_u128().unwrap_or(u128::MAX);
    let required = replicas_total.saturating_mul(p as u128);
    if required > cap as u128 {
        return Err(Error::ScenarioCapExceeded { required, cap });
    }
    let replicas_total = replicas_total as usize;

    let mut replica_of: Vec<usize> = Vec::with_capacity(replicas_total);
    for (index, scenario) in pattern.scenarios().iter().enumerate() {
        let count = (&scenario.probability * &Rat::from_big(denom.clone(), 1.into()))
            .numer()
            .to_usize()
            .expect("replica count fits after cap check");
        replica_of.extend(std::iter::repeat_n(index, count));
    }
    debug_assert_eq!(replica_of.len(), replicas_total);

    match order {
        ExpansionOrder::Identity => {}
        ExpansionOrder::Permutation(perm) => {
            if perm.len() != replicas_total {
                return Err(Error::InvalidPermutation {
                    expected: replicas_total,
                });
            }
            let mut seen = vec![false; replicas_total];
            for &i in perm {
                if i >= replicas_total || seen[i] {
                    return Err(Error::InvalidPermutation {
                        expected: replicas_total,
                    });
                }
                seen[i] = true;
            }
            replica_of = perm.iter().map(|&i| replica_of[i]).collect();
        }
        ExpansionOrder::Seeded(seed) => {
            SplitMix64::new(*seed).shuffle(&mut replica_of);
        }
    }

    let mut values = Vec::with_capacity(replicas_total * p);
    for &index in &replica_of {
        values.extend_from_slice(pattern.scenarios()[index].outcome.values());
    }
    DeterministicPattern::new(values)
}

pub const FIGURE_NAMES: [&str; 2] = ["fig1", "fig2"];

/// The two fixed blocks used in the worked examples: an alternating block
/// with a kick, and its amplified variant whose evolution builds a bubble.
pub fn figure_pattern(name: &str) -> Result<DeterministicPattern, Error> {
    match name {
        "fig1" => Ok(DeterministicPattern::from_ints(&[-1, 1, -1, 1, -1, 1, 2])),
        "fig2" => Ok(DeterministicPattern::from_ints(&[-2, 2, -2, 2, -2, 2, 3])),
        other => Err(Error::UnknownFigure(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_optimal_gain, DEFAULT_TABLE_CAP};
    use crate::strategy::optimal_gain;

    #[test]
    fn parity_memory_one_matches_hand_expansion() {
        let p = parity_pattern(1).unwrap();
        let expected: Vec<Vec<i64>> =
            vec![vec![1, 1, 1], vec![1, -1, -1], vec![-1, 1, -1], vec![-1, -1, 1]];
        assert_eq!(p.scenarios().len(), 4);
        for (scenario, values) in p.scenarios().iter().zip(&expected) {
            assert_eq!(scenario.probability, Rat::new(1, 4));
            assert_eq!(scenario.outcome, DeterministicPattern::from_ints(values));
        }
    }

    #[test]
    fn parity_structure_holds_for_small_memories() {
        for memory in 1..=4usize {
            let p = parity_pattern(memory).unwrap();
            assert_eq!(p.block_len(), memory + 2);
            assert_eq!(p.scenarios().len(), 1 << (memory + 1));
            for s in p.scenarios() {
                let values = s.outcome.values();
                let product: Rat = values[..values.len() - 1]
                    .iter()
                    .fold(Rat::one(), |acc, v| &acc * v);
                assert_eq!(values[values.len() - 1], product);
                assert!(values.iter().all(|v| v.abs() == Rat::one()));
            }
        }
    }

    #[test]
    fn parity_window_enumeration_at_the_product_position() {
        // Memory-2 windows over two adjacent blocks of the memory-1 parity
        // block: at position 3 the context is the block's own (X_1, X_2),
        // each with total probability 1/4 after the previous block
        // marginalizes out, and the target is their product.
        let p = parity_pattern(1).unwrap();
        let samples = crate::pattern::enumerate_windows(&p, 2).unwrap();
        let at_three: Vec<_> = samples.iter().filter(|s| s.position == 3).collect();
        // The window sits inside the current block, so there is one tuple
        // per current scenario at probability 1/4, and the previous block
        // never enters.
        assert_eq!(at_three.len(), 4);
        let mut contexts = std::collections::BTreeSet::new();
        for s in &at_three {
            let product = &s.context.values()[0] * &s.context.values()[1];
            assert_eq!(s.target, product);
            assert_eq!(s.probability, Rat::new(1, 4));
            contexts.insert(s.context.clone());
        }
        assert_eq!(contexts.len(), 4);
        // Positions 1 and 2 do span the block boundary: 4 x 4 pairs each.
        for position in [1usize, 2] {
            assert_eq!(
                samples.iter().filter(|s| s.position == position).count(),
                16
            );
        }
    }

    #[test]
    fn parity_hierarchy_gains() {
        for memory in 1..=3usize {
            let p = Pattern::Scenario(parity_pattern(memory).unwrap());
            assert_eq!(optimal_gain(&p, memory).unwrap(), Rat::zero());
            assert_eq!(optimal_gain(&p, memory + 1).unwrap(), Rat::one());
        }
    }

    #[test]
    fn feedoff_two_three_matches_hand_layout() {
        // Entries of the (low=2, high=3) block as explicit functions of
        // (x1, x2, x3, y2, y3), written out independently of the generator.
        type E = fn(i64, i64, i64, i64, i64) -> i64;
        let entries: [E; 13] = [
            |x1, _, _, _, _| x1,
            |_, x2, _, _, _| 10 * x2,
            |x1, x2, _, _, _| 30 * x1 * x2,
            |_, _, _, y2, _| y2,
            |_, _, _, _, y3| 40 * y3,
            |x1, x2, _, y2, y3| x1 * x2 * y2 * y3,
            |x1, _, _, _, _| x1,
            |_, x2, _, _, _| x2,
            |_, _, x3, _, _| 20 * x3,
            |x1, x2, x3, _, _| 30 * x1 * x2 * x3,
            |_, _, _, y2, _| y2,
            |_, _, _, _, y3| 40 * y3,
            |x1, x2, x3, y2, y3| -x1 * x2 * x3 * y2 * y3,
        ];
        let p = feedoff_pattern(&FeedoffParams::new(2, 3)).unwrap();
        assert_eq!(p.block_len(), 13);
        assert_eq!(p.scenarios().len(), 32);
        for (idx, scenario) in p.scenarios().iter().enumerate() {
            assert_eq!(scenario.probability, Rat::new(1, 32));
            let sign = |bit: usize| if idx >> (4 - bit) & 1 == 0 { 1i64 } else { -1 };
            let (x1, x2, x3, y2, y3) = (sign(0), sign(1), sign(2), sign(3), sign(4));
            let expected: Vec<i64> = entries.iter().map(|e| e(x1, x2, x3, y2, y3)).collect();
            assert_eq!(
                scenario.outcome,
                DeterministicPattern::from_ints(&expected),
                "scenario {idx}"
            );
        }
    }

    #[test]
    fn feedoff_one_two_matches_hand_layout() {
        type E = fn(i64, i64, i64) -> i64;
        let entries: [E; 9] = [
            |x1, _, _| 10 * x1,
            |x1, _, _| 30 * x1,
            |_, _, y2| 40 * y2,
            |x1, _, y2| x1 * y2,
            |x1, _, _| x1,
            |_, x2, _| 20 * x2,
            |x1, x2, _| 30 * x1 * x2,
            |_, _, y2| 40 * y2,
            |x1, x2, y2| -x1 * x2 * y2,
        ];
        let p = feedoff_pattern(&FeedoffParams::new(1, 2)).unwrap();
        assert_eq!(p.block_len(), 9);
        assert_eq!(p.scenarios().len(), 8);
        for (idx, scenario) in p.scenarios().iter().enumerate() {
            let sign = |bit: usize| if idx >> (2 - bit) & 1 == 0 { 1i64 } else { -1 };
            let (x1, x2, y2) = (sign(0), sign(1), sign(2));
            let expected: Vec<i64> = entries.iter().map(|e| e(x1, x2, y2)).collect();
            assert_eq!(scenario.outcome, DeterministicPattern::from_ints(&expected));
        }
    }

    #[test]
    fn feedoff_blocks_validate_for_small_memories() {
        for low in 1..=3usize {
            for high in low + 1..=4 {
                let p = feedoff_pattern(&FeedoffParams::new(low, high)).unwrap();
                assert!(ScenarioPattern::check(p.scenarios()).is_empty());
            }
        }
    }

    #[test]
    fn feedoff_params_validation() {
        assert!(FeedoffParams::new(2, 2).validate().is_err());
        assert!(FeedoffParams::new(0, 2).validate().is_err());
        let mut equal_markers = FeedoffParams::new(2, 3);
        equal_markers.mask = Rat::from_int(-10);
        assert!(equal_markers.validate().is_err());
        let mut tiny = FeedoffParams::new(2, 3);
        tiny.low_marker = Rat::one();
        assert!(tiny.validate().is_err());
        assert!(FeedoffParams::new(2, 3).validate().is_ok());
    }

    #[test]
    fn feedoff_report_two_three_has_the_expected_gains() {
        let report = feedoff_report(&FeedoffParams::new(2, 3)).unwrap();
        assert_eq!(report.gain_low_on_base, Rat::one());
        assert_eq!(report.gain_high_on_base, Rat::from_int(2));
        assert_eq!(report.gain_high_on_low_evolved, Rat::from_int(4));
        assert_eq!(report.gain_low_on_low_evolved, Rat::one());
        assert_eq!(report.gain_high_on_high_evolved, Rat::from_int(2));
        assert!(report.inequality_holds);
    }

    #[test]
    fn feedoff_evolution_dents_the_payoff_entries() {
        let params = FeedoffParams::new(2, 3);
        let base = feedoff_pattern(&params).unwrap();
        let low = optimal_strategy(&Pattern::Scenario(base.clone()), 2).unwrap();
        let evolved = evolve_scenario(&base, &low).unwrap();
        for (before, after) in base.scenarios().iter().zip(evolved.scenarios()) {
            for position in 1..=13usize {
                let b = before.outcome.value(position);
                let a = after.outcome.value(position);
                if position == 3 {
                    // 30·X1X2 shrinks toward zero by one.
                    assert_eq!(a.abs(), Rat::from_int(29));
                    assert_eq!(a.sign(), b.sign());
                } else {
                    assert_eq!(a, b, "position {position}");
                }
            }
        }

        let high = optimal_strategy(&Pattern::Scenario(base.clone()), 3).unwrap();
        let evolved = evolve_scenario(&base, &high).unwrap();
        for (before, after) in base.scenarios().iter().zip(evolved.scenarios()) {
            for position in 1..=13usize {
                let b = before.outcome.value(position);
                let a = after.outcome.value(position);
                if position == 3 || position == 10 {
                    assert_eq!(a.abs(), Rat::from_int(29), "position {position}");
                    assert_eq!(a.sign(), b.sign());
                } else {
                    assert_eq!(a, b, "position {position}");
                }
            }
        }
    }

    #[test]
    fn expansion_of_parity_one_in_identity_order() {
        let p = parity_pattern(1).unwrap();
        let expanded = expand_to_deterministic(&p, &ExpansionOrder::Identity).unwrap();
        assert_eq!(
            expanded,
            DeterministicPattern::from_ints(&[1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1])
        );
    }

    #[test]
    fn expansion_of_singleton_is_its_outcome() {
        let det = DeterministicPattern::from_ints(&[3, -1, 2]);
        let single = ScenarioPattern::singleton(det.clone());
        assert_eq!(
            expand_to_deterministic(&single, &ExpansionOrder::Identity).unwrap(),
            det
        );
    }

    #[test]
    fn expansion_respects_permutations_and_rejects_bad_ones(){
        let p = parity_pattern(1).unwrap();
        let reversed =
            expand_to_deterministic(&p, &ExpansionOrder::Permutation(vec![3, 2, 1, 0])).unwrap();
        assert_eq!(
            reversed,
            DeterministicPattern::from_ints(&[-1, -1, 1, -1, 1, -1, 1, -1, -1, 1, 1, 1])
        );
        assert!(matches!(
            expand_to_deterministic(&p, &ExpansionOrder::Permutation(vec![0, 0, 1, 2])),
            Err(Error::InvalidPermutation { .. })
        ));
        assert!(matches!(
            expand_to_deterministic(&p, &ExpansionOrder::Permutation(vec![0, 1])),
            Err(Error::InvalidPermutation { .. })
        ));
    }

    #[test]
    fn seeded_expansion_is_reproducible_and_preserves_the_multiset() {
        let p = parity_pattern(1).unwrap();
        let a = expand_to_deterministic(&p, &ExpansionOrder::Seeded(9)).unwrap();
        let b = expand_to_deterministic(&p, &ExpansionOrder::Seeded(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        let mut blocks: Vec<Vec<Rat>> = a.values().chunks(3).map(|c| c.to_vec()).collect();
        blocks.sort();
        let mut expected: Vec<Vec<Rat>> = p
            .scenarios()
            .iter()
            .map(|s| s.outcome.values().to_vec())
            .collect();
        expected.sort();
        assert_eq!(blocks, expected);
    }

    #[test]
    fn expansion_gain_versus_scaled_randomized_gain() {
        // Four replicas of the parity block: the expanded optimum need not
        // equal replicas × randomized optimum in general, because windows
        // straddling replica boundaries leak information. Both numbers are
        // computed exactly; for this instance they happen to agree.
        let p = parity_pattern(1).unwrap();
        let randomized = optimal_gain(&Pattern::Scenario(p.clone()), 2).unwrap();
        let expanded = expand_to_deterministic(&p, &ExpansionOrder::Identity).unwrap();
        let expanded_gain = optimal_gain(&Pattern::Deterministic(expanded.clone()), 2).unwrap();
        assert_eq!(randomized, Rat::one());
        assert_eq!(expanded_gain, Rat::from_int(4));
        assert_eq!(
            brute_force_optimal_gain(&Pattern::Deterministic(expanded), 2, DEFAULT_TABLE_CAP)
                .unwrap(),
            Rat::from_int(4)
        );
    }

    #[test]
    fn figure_catalog() {
        assert_eq!(
            figure_pattern("fig1").unwrap(),
            DeterministicPattern::from_ints(&[-1, 1, -1, 1, -1, 1, 2])
        );
        assert_eq!(
            figure_pattern("fig2").unwrap(),
            DeterministicPattern::from_ints(&[-2, 2, -2, 2, -2, 2, 3])
        );
        assert!(matches!(
            figure_pattern("fig3"),
            Err(Error::UnknownFigure(_))
        ));
    }

    #[test]
    fn scenario_cap_is_enforced() {
        assert!(matches!(
            parity_pattern_capped(10, 100),
            Err(Error::ScenarioCapExceeded { .. })
        ));
    }
}
