//! Cross-module behavior of the full engine: the feed-off family end to
//! end, multi-block windows, and the boundary semantics of evolution.

use patmark_core::*;

#[test]
fn feedoff_inequality_holds_across_the_memory_grid() {
    for low in 2..=3usize {
        for high in low + 1..=4 {
            let report = feedoff_report(&FeedoffParams::new(low, high)).unwrap();
            assert!(
                report.inequality_holds,
                "feed-off inequality failed at ({low}, {high}): {report:?}"
            );
            assert_eq!(report.gain_low_on_base, Rat::one());
            assert_eq!(report.gain_high_on_base, Rat::from_int(2));
            assert_eq!(report.gain_high_on_low_evolved, Rat::from_int(4));
            assert_eq!(report.gain_low_on_low_evolved, Rat::one());
            assert_eq!(report.gain_high_on_high_evolved, Rat::from_int(2));
        }
    }
}

#[test]
fn feedoff_evolutions_dent_exactly_the_payoff_entries() {
    for low in 2..=3usize {
        for high in low + 1..=4 {
            let params = FeedoffParams::new(low, high);
            let base = feedoff_pattern(&params).unwrap();
            let pattern = Pattern::Scenario(base.clone());
            let first_payoff = low + 1;
            let second_payoff = (low + high + 1) + high + 1;

            let evolved = evolve_scenario(&base, &optimal_strategy(&pattern, low).unwrap()).unwrap();
            assert_dented(&base, &evolved, &[first_payoff], low, high);

            let evolved =
                evolve_scenario(&base, &optimal_strategy(&pattern, high).unwrap()).unwrap();
            assert_dented(&base, &evolved, &[first_payoff, second_payoff], low, high);
        }
    }
}

fn assert_dented(
    base: &ScenarioPattern,
    evolved: &ScenarioPattern,
    dented: &[usize],
    low: usize,
    high: usize,
) {
    for (before, after) in base.scenarios().iter().zip(evolved.scenarios()) {
        for position in 1..=base.block_len() {
            let b = before.outcome.value(position);
            let a = after.outcome.value(position);
            if dented.contains(&position) {
                assert_eq!(
                    a.abs(),
                    &b.abs() - &Rat::one(),
                    "({low},{high}) position {position} should shrink by one"
                );
                assert_eq!(a.sign(), b.sign());
            } else {
                assert_eq!(a, b, "({low},{high}) position {position} should be untouched");
            }
        }
    }
}

/// At the lowest memory the construction degenerates: the window before the
/// second-half opening return reveals that return outright, so every
/// gain-maximizing high-memory table must act on a context that position 1
/// realizes from the previous block. The high-memory evolution therefore
/// genuinely leaves the pattern class, and the report propagates the error.
#[test]
fn feedoff_at_memory_one_is_boundary_dependent_for_the_high_agent() {
    for high in 2..=4usize {
        let params = FeedoffParams::new(1, high);
        let base = feedoff_pattern(&params).unwrap();
        let pattern = Pattern::Scenario(base.clone());

        let low = optimal_strategy(&pattern, 1).unwrap();
        assert!(evolve_scenario(&base, &low).is_ok(), "high {high}");

        let high_strategy = optimal_strategy(&pattern, high).unwrap();
        assert_eq!(
            evolve_scenario(&base, &high_strategy),
            Err(Error::BoundaryDependent { position: 1 }),
            "high {high}"
        );
        assert_eq!(
            feedoff_report(&params),
            Err(Error::BoundaryDependent { position: 1 }),
            "high {high}"
        );
    }
}

#[test]
fn fair_coin_stays_efficient_even_with_windows_spanning_many_blocks() {
    let coin = Pattern::Scenario(fair_coin());
    for memory in 1..=6 {
        assert!(is_efficient(&coin, memory).unwrap(), "memory {memory}");
        assert_eq!(
            brute_force_optimal_gain(&coin, memory, DEFAULT_TABLE_CAP)
                .or_else(|_| optimal_gain(&coin, memory)),
            Ok(Rat::zero()),
            "memory {memory}"
        );
    }
}

/// Reading the parity block at one extra unit of memory requires acting on
/// every ±1 window, and those windows reach into the previous block at the
/// early positions: the profitable strategy cannot evolve the block inside
/// the pattern class. Profit extraction and clean evolution part ways here.
#[test]
fn parity_exploitation_is_boundary_dependent() {
    for memory in 1..=3usize {
        let p = parity_pattern(memory).unwrap();
        let exploit = optimal_strategy(&Pattern::Scenario(p.clone()), memory + 1).unwrap();
        assert!(!exploit.is_all_zero());
        assert_eq!(
            evolve_scenario(&p, &exploit),
            Err(Error::BoundaryDependent { position: 1 }),
            "memory {memory}"
        );

        // At its own memory the block is efficient and evolution fixes it.
        let fixed = optimal_strategy(&Pattern::Scenario(p.clone()), memory).unwrap();
        assert!(fixed.is_all_zero());
        assert_eq!(evolve_scenario(&p, &fixed).unwrap(), p);
    }
}

#[test]
fn bubble_chain_and_calm_run_from_the_amplified_block() {
    let start = Pattern::Deterministic(figure_pattern("fig2").unwrap());

    let (trajectory, bubble) = iterate(&start, &[2, 2], &IterateOptions::default()).unwrap();
    let spike = Pattern::Deterministic(DeterministicPattern::from_ints(&[0, 0, 0, 0, 0, 0, 5]));
    assert_eq!(trajectory.final_pattern(), &spike);
    assert!(bubble.flagged);

    let (_, calm) = iterate(&start, &[3], &IterateOptions::default()).unwrap();
    assert!(!calm.flagged);
    assert!(calm.amplitudes.iter().all(|a| *a <= Rat::from_int(3)));
}

#[test]
fn min_inefficient_memory_matches_the_parity_hierarchy() {
    for memory in 1..=3usize {
        let p = Pattern::Scenario(parity_pattern(memory).unwrap());
        assert_eq!(
            min_inefficient_memory(&p, memory + 2).unwrap(),
            Some(memory + 1)
        );
    }
}
