use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use simverify::{
    read_rows, run_experiment, summarize, write_rows, write_summary, ExperimentConfig, Preset,
};

#[derive(Parser)]
#[command(
    name = "simverify",
    about = "Simulation study for DP verification of synthetic-data estimates"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write one row per replicate.
    Run {
        /// JSON experiment config.
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Override the config's base seed.
        #[arg(long)]
        base_seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize replicate rows per grid cell.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .context("configuring thread pool")?;
    }
    match cli.command {
        Command::Run {
            config,
            preset,
            base_seed,
            out,
        } => {
            let mut cfg = match (config, preset) {
                (Some(path), _) => ExperimentConfig::from_json_file(&path)
                    .with_context(|| format!("reading config {}", path.display()))?,
                (None, Some(p)) => ExperimentConfig::preset(p),
                (None, None) => ExperimentConfig::desk(),
            };
            if let Some(seed) = base_seed {
                cfg.base_seed = seed;
            }
            let rows = run_experiment(&cfg)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_rows(&rows, BufWriter::new(file))?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Summarize { input, out } => {
            let file =
                File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let rows = read_rows(BufReader::new(file))?;
            let summary = summarize(&rows)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_summary(&summary, BufWriter::new(file))?;
            eprintln!("wrote {} cells to {}", summary.len(), out.display());
        }
    }
    Ok(())
}
