//! Command-line surface. Exit codes: 0 success, 2 validation/runtime
//! errors (json mode prints a machine-readable payload), 64 command-line
//! misuse (clap usage text).

use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use patmark_core::{
    autocorr1, compare_gain_autocorr, expand_to_deterministic, fair_coin, feedoff_pattern,
    feedoff_report, figure_pattern, gain, is_efficient, iterate, min_inefficient_memory,
    optimal_gain, optimal_strategy, parity_pattern, price_path, sweep, ExpansionOrder,
    FeedoffParams, IterateOptions, Pattern, Rat, SweepConfig, TabulatedStrategy,
};

use crate::error::{io_err, CliError};
use crate::formats::{parse_pattern, parse_strategy, serialize_pattern};
use crate::ingest::{ingest, ColumnSel, IngestMode, IngestSpec};
use crate::reports;
use crate::svg::{price_chart_svg, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "patmark",
    version,
    about = "Memory-bounded strategies on repeating market patterns: optimal tables, gains, \
             efficiency, evolution, bubbles, feed-off comparisons and sweeps. All arithmetic \
             is exact rational."
)]
pub struct Cli {
    /// Pattern file, or a built-in name: fig1, fig2, faircoin.
    #[arg(long, global = true, value_name = "FILE|NAME")]
    pub pattern: Option<String>,

    /// Strategy memory.
    #[arg(long, global = true, value_name = "M")]
    pub memory: Option<usize>,

    /// Memory schedule for iterated evolution, e.g. 2,2,3.
    #[arg(long, global = true, value_delimiter = ',', value_name = "M1,M2,…")]
    pub schedule: Option<Vec<usize>>,

    /// Step count for sweeps.
    #[arg(long, global = true, value_name = "N")]
    pub steps: Option<usize>,

    /// Bubble threshold ratio (rational, default 3/2).
    #[arg(long, global = true, value_name = "Q")]
    pub theta: Option<String>,

    /// Seed for random generation and shuffles.
    #[arg(long, global = true, value_name = "S")]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Write the output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate a strategy file's gain on a pattern.
    Gain {
        /// Strategy file (see `optimal --out` for the format).
        #[arg(long, value_name = "FILE")]
        strategy: PathBuf,
    },
    /// Solve for the least-trading optimal strategy at a memory.
    Optimal,
    /// Apply one market evolution, by the optimal strategy or one from a file.
    Evolve {
        #[arg(long, value_name = "FILE")]
        strategy: Option<PathBuf>,
    },
    /// Iterate optimal evolution under a memory schedule.
    Iterate {
        /// Keep applying the step-0 strategy instead of re-solving.
        #[arg(long)]
        freeze: bool,
    },
    /// Test whether a pattern is efficient at a memory.
    Efficient,
    /// Smallest memory (up to a bound) at which the pattern is exploitable.
    MinMemory {
        #[arg(long, value_name = "M")]
        max_memory: usize,
    },
    /// Emit a pattern from the built-in families.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Gains before and after low- and high-memory agents act.
    FeedoffReport(FeedoffArgs),
    /// Expand a scenario pattern into the deterministic block of all its
    /// combinations (order: scenario order, a permutation, or seeded).
    Expand {
        /// Permutation of replica indices, e.g. 3,1,0,2.
        #[arg(long, value_delimiter = ',', value_name = "I0,I1,…")]
        order: Option<Vec<usize>>,
    },
    /// Generate seeded random patterns and collect bubble statistics.
    Sweep {
        #[arg(long, value_name = "N")]
        count: usize,
        #[arg(long, value_name = "P")]
        length: usize,
        /// Values drawn uniformly, e.g. -3,-2,-1,1,2,3.
        #[arg(long, value_delimiter = ',', value_name = "Q1,Q2,…", allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Sign autocorrelation next to the memory-1 optimal gain.
    Autocorr,
    /// Turn a CSV series into a pattern file.
    Ingest {
        #[arg(long, value_name = "PATH")]
        csv: PathBuf,
        /// Column header name or 0-based index.
        #[arg(long, value_name = "NAME|IDX")]
        column: String,
        #[arg(long, value_enum, default_value_t = IngestModeArg::Returns)]
        mode: IngestModeArg,
        /// Snap returns to the nearest multiple of this rational.
        #[arg(long, value_name = "Q", allow_hyphen_values = true)]
        quantum: Option<String>,
        /// The file has no header row (requires an index column).
        #[arg(long)]
        no_header: bool,
    },
    /// Render price paths as an SVG line chart; with --schedule, one series
    /// per evolution step.
    Plot {
        /// Starting price of the path.
        #[arg(long, value_name = "Q", default_value = "0", allow_hyphen_values = true)]
        start: String,
    },
}

#[derive(Subcommand)]
pub enum ConstructCmd {
    /// Parity block for --memory M: efficient at M, exploitable at M+1.
    Parity,
    /// Feed-off block for a low/high memory pair.
    Feedoff(FeedoffArgs),
    /// Fixed example blocks by name.
    Figure {
        /// One of: fig1, fig2.
        #[arg(long, value_name = "NAME")]
        name: String,
    },
}

#[derive(Args)]
pub struct FeedoffArgs {
    /// Low memory.
    #[arg(long)]
    pub m: usize,
    /// High memory (must exceed --m).
    #[arg(long)]
    pub mprime: usize,
    /// Scale of the entry the low-memory agent predicts from (default 10).
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    pub marker_low: Option<String>,
    /// Scale of the entry only the high-memory agent reads (default 20).
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    pub marker_high: Option<String>,
    /// Scale of the predictable payoff entries (default 30).
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    pub payoff: Option<String>,
    /// Scale of the mutually cancelling pair (default 40).
    #[arg(long, value_name = "Q", allow_hyphen_values = true)]
    pub mask: Option<String>,
}

pub fn run_from_args() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 64;
        }
    };

    let format = cli.format;
    let out = cli.out.clone();
    match execute(cli) {
        Ok(text) => match out {
            None => {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
                0
            }
            Some(path) => match fs::write(&path, text) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    2
                }
            },
        },
        Err(e) if matches!(e, CliError::Usage(_)) => {
            eprintln!("usage error: {e}");
            eprintln!("run `patmark --help` for usage");
            64
        }
        Err(e) => {
            match format {
                OutputFormat::Json => {
                    let payload = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
                    println!("{}", serde_json::to_string_pretty(&payload).expect("payload"));
                }
                OutputFormat::Csv => eprintln!("error: {e}"),
            }
            2
        }
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let theta = parse_flag_rat(cli.theta.as_deref(), "--theta")?
        .unwrap_or_else(patmark_core::default_theta);

    match &cli.command {
        Command::Gain { strategy } => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let strategy = load_strategy(strategy)?;
            let report = gain(&strategy, &pattern)?;
            render_json(&cli, reports::gain_report_json(&strategy, &report))
        }

        Command::Optimal => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let memory = require_memory(&cli)?;
            let strategy = optimal_strategy(&pattern, memory)?;
            let report = gain(&strategy, &pattern)?;
            let weights = patmark_core::context_weights(&pattern, memory)?;
            render_json(
                &cli,
                json!({
                    "memory": memory,
                    "strategy": reports::strategy_json(&strategy),
                    "gain": reports::rat_json(&report.gain),
                    "weights": reports::weights_json(&weights),
                }),
            )
        }

        Command::Evolve { strategy } => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let strategy = match strategy {
                Some(path) => load_strategy(path)?,
                None => optimal_strategy(&pattern, require_memory(&cli)?)?,
            };
            let after = patmark_core::evolve(&pattern, &strategy)?;
            let report = gain(&strategy, &pattern)?;
            render_json(
                &cli,
                json!({
                    "memory": strategy.memory(),
                    "strategy": reports::strategy_json(&strategy),
                    "gain": reports::rat_json(&report.gain),
                    "before": reports::pattern_json(&pattern),
                    "after": reports::pattern_json(&after),
                    "notes": [reports::EVOLUTION_NOTE],
                }),
            )
        }

        Command::Iterate { freeze } => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let schedule = cli.schedule.clone().ok_or_else(|| {
                CliError::Usage("--schedule is required for iterate".to_string())
            })?;
            let options = IterateOptions {
                theta,
                freeze_first_strategy: *freeze,
            };
            let (trajectory, bubble) = iterate(&pattern, &schedule, &options)?;
            match cli.format {
                OutputFormat::Json => Ok(pretty(reports::trajectory_json(&trajectory, &bubble))),
                OutputFormat::Csv => reports::trajectory_csv(&trajectory),
            }
        }

        Command::Efficient => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let memory = require_memory(&cli)?;
            let efficient = is_efficient(&pattern, memory)?;
            render_json(
                &cli,
                json!({
                    "memory": memory,
                    "efficient": efficient,
                    "optimal_gain": reports::rat_json(&optimal_gain(&pattern, memory)?),
                }),
            )
        }

        Command::MinMemory { max_memory } => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let found = min_inefficient_memory(&pattern, *max_memory)?;
            render_json(
                &cli,
                json!({"max_memory": max_memory, "min_inefficient_memory": found}),
            )
        }

        Command::Construct(what) => {
            let pattern = match what {
                ConstructCmd::Parity => {
                    Pattern::Scenario(parity_pattern(require_memory(&cli)?)?)
                }
                ConstructCmd::Feedoff(args) => {
                    Pattern::Scenario(feedoff_pattern(&feedoff_params(args)?)?)
                }
                ConstructCmd::Figure { name } => Pattern::Deterministic(figure_pattern(name)?),
            };
            require_json(&cli)?;
            Ok(serialize_pattern(&pattern, None))
        }

        Command::FeedoffReport(args) => {
            let report = feedoff_report(&feedoff_params(args)?)?;
            render_json(&cli, reports::feedoff_json(&report))
        }

        Command::Expand { order } => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let scenario = match &pattern {
                Pattern::Scenario(p) => p,
                Pattern::Deterministic(_) => {
                    return Err(CliError::Validation(
                        "expand needs a scenario pattern".to_string(),
                    ))
                }
            };
            let order = match (order, cli.seed) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Usage(
                        "--order and --seed are mutually exclusive".to_string(),
                    ))
                }
                (Some(perm), None) => ExpansionOrder::Permutation(perm.clone()),
                (None, Some(seed)) => ExpansionOrder::Seeded(seed),
                (None, None) => ExpansionOrder::Identity,
            };
            let expanded = expand_to_deterministic(scenario, &order)?;
            require_json(&cli)?;
            Ok(serialize_pattern(&Pattern::Deterministic(expanded), None))
        }

        Command::Sweep {
            count,
            length,
            values,
        } => {
            let value_set = values
                .iter()
                .map(|v| parse_flag_rat(Some(v), "--values").map(|r| r.expect("some")))
                .collect::<Result<Vec<Rat>, CliError>>()?;
            let config = SweepConfig {
                count: *count,
                pattern_length: *length,
                value_set,
                memory: require_memory(&cli)?,
                steps: cli.steps.ok_or_else(|| {
                    CliError::Usage("--steps is required for sweep".to_string())
                })?,
                theta,
                seed: cli.seed.unwrap_or(0),
            };
            let report = sweep(&config)?;
            match cli.format {
                OutputFormat::Json => Ok(pretty(reports::sweep_json(&report))),
                OutputFormat::Csv => Ok(reports::sweep_csv(&report)),
            }
        }

        Command::Autocorr => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let det = pattern.as_deterministic().ok_or_else(|| {
                CliError::Validation("autocorr needs a deterministic pattern".to_string())
            })?;
            let comparison = compare_gain_autocorr(det)?;
            render_json(&cli, reports::comparison_json(&autocorr1(det), &comparison))
        }

        Command::Ingest {
            csv,
            column,
            mode,
            quantum,
            no_header,
        } => {
            let spec = IngestSpec {
                path: csv.clone(),
                column: ColumnSel::parse(column),
                mode: match mode {
                    IngestModeArg::Prices => IngestMode::Prices,
                    IngestModeArg::Returns => IngestMode::Returns,
                },
                quantum: parse_flag_rat(quantum.as_deref(), "--quantum")?,
                has_header: !no_header,
            };
            let outcome = ingest(&spec)?;
            require_json(&cli)?;
            Ok(serialize_pattern(
                &Pattern::Deterministic(outcome.pattern),
                Some(&outcome.provenance),
            ))
        }

        Command::Plot { start } => {
            let pattern = load_pattern(cli.pattern.as_ref())?;
            let start = parse_flag_rat(Some(start), "--start")?.expect("some");
            let series = match &cli.schedule {
                None => {
                    let det = require_deterministic(&pattern, "plot")?;
                    vec![Series {
                        label: "pattern".to_string(),
                        path: price_path(det, start),
                    }]
                }
                Some(schedule) => {
                    let options = IterateOptions {
                        theta,
                        freeze_first_strategy: false,
                    };
                    let (trajectory, _) = iterate(&pattern, schedule, &options)?;
                    trajectory
                        .pattern_chain()
                        .iter()
                        .enumerate()
                        .map(|(step, p)| {
                            let det = require_deterministic(p, "plot")?;
                            Ok(Series {
                                label: format!("step {step}"),
                                path: price_path(det, start.clone()),
                            })
                        })
                        .collect::<Result<Vec<_>, CliError>>()?
                }
            };
            Ok(price_chart_svg(&series))
        }
    }
}

fn pretty(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("json renders")
}

fn render_json(cli: &Cli, value: serde_json::Value) -> Result<String, CliError> {
    require_json(cli)?;
    Ok(pretty(value))
}

fn require_json(cli: &Cli) -> Result<(), CliError> {
    match cli.format {
        OutputFormat::Json => Ok(()),
        OutputFormat::Csv => Err(CliError::Usage(
            "csv output is only available for iterate and sweep".to_string(),
        )),
    }
}

fn require_memory(cli: &Cli) -> Result<usize, CliError> {
    cli.memory
        .ok_or_else(|| CliError::Usage("--memory is required for this command".to_string()))
}

fn require_deterministic<'p>(
    pattern: &'p Pattern,
    what: &str,
) -> Result<&'p patmark_core::DeterministicPattern, CliError> {
    pattern.as_deterministic().ok_or_else(|| {
        CliError::Validation(format!("{what} needs a deterministic pattern"))
    })
}

fn parse_flag_rat(text: Option<&str>, flag: &str) -> Result<Option<Rat>, CliError> {
    match text {
        None => Ok(None),
        Some(t) => t
            .parse()
            .map(Some)
            .map_err(|e| CliError::Usage(format!("{flag}: {e}"))),
    }
}

/// Resolves `--pattern`: built-in names first, then a file path.
fn load_pattern(arg: Option<&String>) -> Result<Pattern, CliError> {
    let spec =
        arg.ok_or_else(|| CliError::Usage("--pattern is required for this command".to_string()))?;
    match spec.as_str() {
        "fig1" | "fig2" => Ok(Pattern::Deterministic(figure_pattern(spec)?)),
        "faircoin" => Ok(Pattern::Scenario(fair_coin())),
        path => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            Ok(parse_pattern(&text)?.pattern)
        }
    }
}

fn load_strategy(path: &PathBuf) -> Result<TabulatedStrategy, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path.display().to_string()))?;
    Ok(parse_strategy(&text)?)
}

fn feedoff_params(args: &FeedoffArgs) -> Result<FeedoffParams, CliError> {
    let mut params = FeedoffParams::new(args.m, args.mprime);
    if let Some(q) = parse_flag_rat(args.marker_low.as_deref(), "--marker-low")? {
        params.low_marker = q;
    }
    if let Some(q) = parse_flag_rat(args.marker_high.as_deref(), "--marker-high")? {
        params.high_marker = q;
    }
    if let Some(q) = parse_flag_rat(args.payoff.as_deref(), "--payoff")? {
        params.payoff = q;
    }
    if let Some(q) = parse_flag_rat(args.mask.as_deref(), "--mask")? {
        params.mask = q;
    }
    Ok(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IngestModeArg {
    Prices,
    Returns,
}
