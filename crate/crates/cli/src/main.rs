// SPDX-License-Identifier: Apache-2.0

//! `sentinel`: weak-randomness taint analysis for Solidity.
//!
//! Exit status is 0 on success whatever the verdict, 1 on I/O and parse
//! errors, 2 when scoring sees a single label class and 3 when a contract
//! uses a construct outside the supported subset.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sentinel_core::{Config, SentinelError};

#[derive(Parser, Debug)]
#[command(name = "sentinel", version, about = "Taint analysis for weak randomness in Solidity contracts")]
struct Cli {
    /// TOML or JSON file overriding the default tuning constants.
    #[arg(long, global = true, env = "SENTINEL_CONFIG")]
    config: Option<PathBuf>,

    /// Write the machine-readable result to this file, or `-` for stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<String>,

    /// Seed for corpus generation and splitting.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for multi-file commands; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze contracts and report risk-ranked paths.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Analyze a directory of contracts and write one feature record per contract.
    Corpus {
        dir: PathBuf,
        /// Manifest giving the file order and ground-truth labels.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Destination of the JSON-Lines feature records.
        #[arg(long)]
        out: PathBuf,
        /// Also write rule-based predictions to this JSON-Lines file.
        #[arg(long)]
        preds: Option<PathBuf>,
    },
    /// Score predictions against ground-truth labels.
    Score {
        #[arg(long)]
        preds: PathBuf,
        /// Manifest holding `contract_id` and `vulnerable` for every entry.
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Replace the fixed threshold with the best one for this objective.
        #[arg(long, value_enum)]
        optimize_threshold: Option<ObjectiveArg>,
        /// Destination of the metrics report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a labelled template corpus.
    Gen {
        #[arg(long)]
        out: PathBuf,
        /// Per-category counts, e.g. `vuln_modulo=5,safe_timelock=5`.
        #[arg(long)]
        counts: String,
        /// Also write `train.json` and `test.json`: `balanced` or `imbalanced[:RATIO]`.
        #[arg(long)]
        split: Option<String>,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
    },
    /// Write `<id>.graph.json` and `<id>.record.json` for each contract.
    Export {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Ground-truth label attached to the records.
        #[arg(long, value_enum)]
        label: Option<LabelArg>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ObjectiveArg {
    F1,
    Recall,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LabelArg {
    Vulnerable,
    Safe,
}

fn load_config(path: Option<&PathBuf>) -> anyhow::Result<Config> {
    Ok(match path {
        Some(p) => Config::load(p).map_err(SentinelError::from)?,
        None => Config::default(),
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = load_config(cli.config.as_ref())?;
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()?;
    }
    let out = commands::Output::new(cli.json);
    match cli.command {
        Command::Analyze { files } => commands::analyze(&files, &config, &out),
        Command::Corpus {
            dir,
            manifest,
            out: features,
            preds,
        } => commands::corpus(&dir, manifest.as_deref(), &features, preds.as_deref(), &config, &out),
        Command::Score {
            preds,
            labels,
            threshold,
            optimize_threshold,
            out: metrics,
        } => {
            let objective = optimize_threshold.map(|o| match o {
                ObjectiveArg::F1 => sentinel_core::Objective::F1,
                ObjectiveArg::Recall => sentinel_core::Objective::RecallAtPrecisionFloor,
            });
            commands::score(&preds, &labels, threshold, objective, metrics.as_deref(), &out)
        }
        Command::Gen {
            out: dir,
            counts,
            split,
            test_fraction,
        } => commands::generate(&dir, &counts, cli.seed, split.as_deref(), test_fraction, &out),
        Command::Export { files, out: dir, label } => {
            let label = label.map(|l| matches!(l, LabelArg::Vulnerable));
            commands::export(&files, &dir, label, &config)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<SentinelError>()
                .map_or(1, SentinelError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
