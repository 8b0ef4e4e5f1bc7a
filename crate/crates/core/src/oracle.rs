//! Brute-force optimum, used as an independent check on the solver.
//!
//! Nothing here touches the context-weight machinery. Realizations of the
//! repeated market are materialized the blunt way — enough whole blocks are
//! concatenated that every window is an ordinary slice — and the gain of a
//! table is the plain sum, position by position, of probability times
//! `sign(action · return)`. The optimum is found by trying all `3^k` action
//! tables over the `k` observed contexts, not by reading weights off.
//!
//! The table space explodes quickly, so a configurable cap guards the
//! enumeration; within the cap the scan runs in parallel and is
//! deterministic regardless of thread schedule (it reduces with `max`).

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{Integer, ToPrimitive};
use rayon::prelude::*;

use crate::error::Error;
use crate::pattern::{Context, Pattern};
use crate::rational::Rat;
use crate::strategy::TabulatedStrategy;

/// Default ceiling on the number of tables (`3^k`) the oracle will try.
pub const DEFAULT_TABLE_CAP: u64 = 100_000_000;

/// One fully realized stretch of market: the blocks a window can reach,
/// concatenated oldest-first, with the joint probability of that draw.
struct Realization {
    values: Vec<Rat>,
    probability: Rat,
    /// Index into `values` of position 1 of the newest block.
    base: usize,
}

fn realizations(pattern: &Pattern, memory: usize) -> Vec<Realization> {
    match pattern {
        Pattern::Deterministic(p) => {
            // The market repeats one fixed block; one realization suffices.
            let blocks_back = memory.div_ceil(p.len());
            let mut values = Vec::with_capacity((blocks_back + 1) * p.len());
            for _ in 0..=blocks_back {
                values.extend_from_slice(p.values());
            }
            vec![Realization {
                base: blocks_back * p.len(),
                values,
                probability: Rat::one(),
            }]
        }
        Pattern::Scenario(p) => {
            let block_len = p.block_len();
            let blocks_back = memory.div_ceil(block_len);
            let scenarios = p.scenarios();
            let mut out = Vec::new();
            // Odometer over one scenario choice per block, oldest block first.
            let mut draw = vec![0usize; blocks_back + 1];
            loop {
                let mut values = Vec::with_capacity((blocks_back + 1) * block_len);
                let mut probability = Rat::one();
                for &idx in &draw {
                    values.extend_from_slice(scenarios[idx].outcome.values());
                    probability = &probability * &scenarios[idx].probability;
                }
                out.push(Realization {
                    base: blocks_back * block_len,
                    values,
                    probability,
                });
                if !step(&mut draw, scenarios.len()) {
                    break;
                }
            }
            out
        }
    }
}

fn step(draw: &mut [usize], radix: usize) -> bool {
    for d in draw.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Gain of a fixed strategy evaluated straight off the definition: for each
/// position of the newest block, the expectation of `sign(s(window) · X)`
/// over full realizations of all the blocks involved.
pub fn definition_gain(strategy: &TabulatedStrategy, pattern: &Pattern) -> Result<Rat, Error> {
    let memory = strategy.memory();
    if memory == 0 {
        return Err(Error::ZeroMemory);
    }
    let block_len = pattern.block_len();
    let mut total = Rat::zero();
    for r in realizations(pattern, memory) {
        for position in 1..=block_len {
            let end = r.base + position - 1;
            let window = Context::new(r.values[end - memory..end].to_vec());
            let action = strategy.action(&window);
            let term = (action as i64) * (r.values[end].sign() as i64);
            total += &(&r.probability * &Rat::from_int(term));
        }
    }
    Ok(total)
}

/// Maximum gain over every memory-`memory` strategy, found by exhausting
/// all `3^k` action tables on the observed contexts. Must agree exactly
/// with the solver's optimum; the two share no computation.
pub fn brute_force_optimal_gain(
    pattern: &Pattern,
    memory: usize,
    table_cap: u64,
) -> Result<Rat, Error> {
    if memory == 0 {
        return Err(Error::ZeroMemory);
    }
    let block_len = pattern.block_len();
    let reals = realizations(pattern, memory);

    // Common denominator so every probability becomes an integer count.
    let mut denom = BigInt::from(1);
    for r in &reals {
        denom = denom.lcm(r.probability.denom());
    }

    // Observed contexts, and per (context, target-sign) probability mass.
    // The i-th entry of a table assigns the action of the i-th context.
    let mut context_ids: BTreeMap<Context, usize> = BTreeMap::new();
    let mut mass: BTreeMap<(usize, i8), BigInt> = BTreeMap::new();
    for r in &reals {
        let num = (&r.probability * &Rat::from_big(denom.clone(), BigInt::from(1)))
            .numer()
            .clone();
        for position in 1..=block_len {
            let end = r.base + position - 1;
            let window = Context::new(r.values[end - memory..end].to_vec());
            let next = context_ids.len();
            let id = *context_ids.entry(window).or_insert(next);
            let sign = r.values[end].sign();
            if sign != 0 {
                *mass.entry((id, sign)).or_insert_with(|| BigInt::from(0)) += &num;
            }
        }
    }

    let contexts = context_ids.len();
    let tables = 3u128
        .checked_pow(contexts as u32)
        .ok_or(Error::OracleCapExceeded {
            contexts,
            cap: table_cap,
        })?;
    if tables > table_cap as u128 {
        return Err(Error::OracleCapExceeded {
            contexts,
            cap: table_cap,
        });
    }

    // Flatten to (context id, signed integer mass) for the scan; the
    // accumulator is i64, so the total mass must fit too.
    let entries: Vec<(u32, i64)> = mass
        .iter()
        .map(|(&(id, sign), m)| {
            let m = m.to_i64().ok_or(Error::OracleOverflow)?;
            Ok((id as u32, sign as i64 * m))
        })
        .collect::<Result<_, Error>>()?;
    let total: i128 = entries.iter().map(|&(_, m)| (m as i128).abs()).sum();
    if total > i64::MAX as i128 {
        return Err(Error::OracleOverflow);
    }

    let tables = tables as u64;
    let chunk: u64 = 1 << 14;
    let n_chunks = tables.div_ceil(chunk);
    let best = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let stop = (start + chunk).min(tables);
            let mut actions = decode_table(start, contexts);
            let mut best = i64::MIN;
            for _ in start..stop {
                let mut acc = 0i64;
                for &(id, m) in &entries {
                    acc += actions[id as usize] * m;
                }
                if acc > best {
                    best = acc;
                }
                advance_table(&mut actions);
            }
            best
        })
        .max()
        .unwrap_or(0);

    Ok(Rat::from_big(BigInt::from(best), denom))
}

/// Table index → action vector; trits 0, 1, 2 mean actions −1, 0, +1.
fn decode_table(index: u64, contexts: usize) -> Vec<i64> {
    let mut actions = vec![0i64; contexts];
    let mut rest = index;
    for a in actions.iter_mut() {
        *a = (rest % 3) as i64 - 1;
        rest /= 3;
    }
    actions
}

fn advance_table(actions: &mut [i64]) {
    for a in actions.iter_mut() {
        *a += 1;
        if *a <= 1 {
            return;
        }
        *a = -1;
    }
}
