//! JSON and CSV renderings of engine results. Rationals are always strings;
//! maps are emitted in sorted order, so output bytes are stable for fixed
//! inputs and seeds.

use serde_json::{json, Value};

use patmark_core::{
    BubbleReport, Context, ContextWeights, EvolutionTrajectory, FeedoffReport,
    GainAutocorrComparison, GainReport, Pattern, Rat, RatioHistogram, SweepReport,
    TabulatedStrategy, Terminal,
};

use crate::error::CliError;

/// Note attached to evolution output, stating the operator the numbers
/// follow: mispredicted returns move away from zero, which is how the
/// worked chain's final 3 becomes 4 on the way to the 5-spike.
pub const EVOLUTION_NOTE: &str = "each step computes after[i] = before[i] - action(window(i)); \
     a correctly called return shrinks toward 0, a mispredicted one grows: the block \
     [-2,2,-2,2,-2,2,3] maps to [-1,1,-1,1,-1,1,4] (the final 3 meets action -1 and \
     becomes 4) and then to [0,0,0,0,0,0,5]";

pub fn rat_json(value: &Rat) -> Value {
    Value::String(value.to_string())
}

fn context_json(context: &Context) -> Value {
    Value::Array(context.values().iter().map(rat_json).collect())
}

pub fn pattern_json(pattern: &Pattern) -> Value {
    match pattern {
        Pattern::Deterministic(p) => json!({
            "kind": "deterministic",
            "values": p.values().iter().map(rat_json).collect::<Vec<_>>(),
        }),
        Pattern::Scenario(p) => json!({
            "kind": "scenario",
            "scenarios": p.scenarios().iter().map(|s| json!({
                "prob": rat_json(&s.probability),
                "values": s.outcome.values().iter().map(rat_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    }
}

pub fn strategy_json(strategy: &TabulatedStrategy) -> Value {
    json!({
        "memory": strategy.memory(),
        "entries": strategy.entries().map(|(context, action)| json!({
            "context": context_json(context),
            "action": action,
        })).collect::<Vec<_>>(),
    })
}

pub fn weights_json(weights: &ContextWeights) -> Value {
    json!({
        "memory": weights.memory(),
        "weights": weights.iter().map(|(context, weight)| json!({
            "context": context_json(context),
            "weight": rat_json(weight),
        })).collect::<Vec<_>>(),
    })
}

pub fn gain_report_json(strategy: &TabulatedStrategy, report: &GainReport) -> Value {
    json!({
        "memory": strategy.memory(),
        "gain": rat_json(&report.gain),
        "contributions": report.contributions.iter().map(|(context, c)| json!({
            "context": context_json(context),
            "contribution": rat_json(c),
        })).collect::<Vec<_>>(),
    })
}

fn terminal_json(terminal: &Terminal) -> Value {
    Value::String(terminal.label())
}

pub fn bubble_json(bubble: &BubbleReport) -> Value {
    json!({
        "amplitudes": bubble.amplitudes.iter().map(rat_json).collect::<Vec<_>>(),
        "peak_ratio": bubble.peak_ratio.as_ref().map(|r| r.to_string()),
        "flagged": bubble.flagged,
        "theta": rat_json(&bubble.threshold),
    })
}

pub fn trajectory_json(trajectory: &EvolutionTrajectory, bubble: &BubbleReport) -> Value {
    json!({
        "initial": pattern_json(&trajectory.initial),
        "steps": trajectory.steps.iter().map(|step| json!({
            "memory": step.memory,
            "strategy": strategy_json(&step.strategy),
            "gain": rat_json(&step.gain),
            "after": pattern_json(&step.after),
            "amplitude_after": rat_json(&step.amplitude_after),
        })).collect::<Vec<_>>(),
        "final": pattern_json(trajectory.final_pattern()),
        "terminal": terminal_json(&trajectory.terminal),
        "bubble": bubble_json(bubble),
        "notes": [EVOLUTION_NOTE],
    })
}

pub fn feedoff_json(report: &FeedoffReport) -> Value {
    json!({
        "memory_low": report.params.memory_low,
        "memory_high": report.params.memory_high,
        "gains": {
            "low_on_base": rat_json(&report.gain_low_on_base),
            "high_on_base": rat_json(&report.gain_high_on_base),
            "high_on_low_evolved": rat_json(&report.gain_high_on_low_evolved),
            "low_on_low_evolved": rat_json(&report.gain_low_on_low_evolved),
            "high_on_high_evolved": rat_json(&report.gain_high_on_high_evolved),
        },
        "inequality_holds": report.inequality_holds,
    })
}

pub fn comparison_json(autocorr: &Rat, comparison: &GainAutocorrComparison) -> Value {
    json!({
        "autocorr1": rat_json(autocorr),
        "optimal_gain_memory_1": rat_json(&comparison.optimal_gain_memory_1),
        "scaled_autocorr": rat_json(&comparison.scaled_autocorr),
        "sign_valued": comparison.sign_valued,
        "bound_holds": comparison.bound_holds,
    })
}

fn histogram_json(histogram: &RatioHistogram) -> Value {
    json!({
        "bins": histogram.counts.iter().enumerate().map(|(k, count)| json!({
            "range": RatioHistogram::bin_label(k),
            "count": count,
        })).collect::<Vec<_>>(),
        "overflow": histogram.overflow,
        "undefined": histogram.undefined,
    })
}

pub fn sweep_json(report: &SweepReport) -> Value {
    json!({
        "config": {
            "count": report.config.count,
            "length": report.config.pattern_length,
            "values": report.config.value_set.iter().map(rat_json).collect::<Vec<_>>(),
            "memory": report.config.memory,
            "steps": report.config.steps,
            "theta": rat_json(&report.config.theta),
            "seed": report.config.seed,
        },
        "items": report.items.iter().map(|item| json!({
            "index": item.index,
            "seed": item.seed,
            "flagged": item.flagged,
            "peak_ratio": item.peak_ratio.as_ref().map(|r| r.to_string()),
            "terminal": item.terminal.label(),
            "steps_taken": item.steps_taken,
        })).collect::<Vec<_>>(),
        "flagged_count": report.flagged_count,
        "bubble_frequency": rat_json(&report.bubble_frequency),
        "histogram": histogram_json(&report.histogram),
    })
}

/// Trajectory as `step,position,value` rows: step 0 is the initial block,
/// step t the block after t evolutions. Deterministic trajectories only.
pub fn trajectory_csv(trajectory: &EvolutionTrajectory) -> Result<String, CliError> {
    let mut out = String::from("step,position,value\n");
    if trajectory.steps.is_empty() {
        return Ok(out);
    }
    for (step, pattern) in trajectory.pattern_chain().iter().enumerate() {
        let det = pattern.as_deterministic().ok_or_else(|| {
            CliError::Validation(
                "trajectory CSV requires a deterministic pattern; use json output".to_string(),
            )
        })?;
        for (i, value) in det.values().iter().enumerate() {
            out.push_str(&format!("{step},{},{value}\n", i + 1));
        }
    }
    Ok(out)
}


/// Sweep as `seed,flagged,peak_ratio,terminal` rows plus aggregate footer.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("seed,flagged,peak_ratio,terminal\n");
    for item in &report.items {
        out.push_str(&format!(
            "{},{},{},{}\n",
            item.seed,
            item.flagged,
            item.peak_ratio
                .as_ref()
                .map(|r| r.to_string())
                .unwrap_or_else(|| "undefined".to_string()),
            item.terminal.label(),
        ));
    }
    out.push_str(&format!(
        "# flagged {} of {}; frequency {}\n",
        report.flagged_count, report.config.count, report.bubble_frequency
    ));
    for (k, count) in report.histogram.counts.iter().enumerate() {
        out.push_str(&format!(
            "# ratio {} count {count}\n",
            RatioHistogram::bin_label(k)
        ));
    }
    out.push_str(&format!(
        "# ratio >=4 count {}\n# ratio undefined count {}\n",
        report.histogram.overflow, report.histogram.undefined
    ));
    out
}
