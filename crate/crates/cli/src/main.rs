use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use topostress::commands::{cmd_all, cmd_evaluate, cmd_extract, cmd_synth};
use topostress::config::ExperimentConfig;
use topostress::{io, par};

#[derive(Parser)]
#[command(name = "topostress", version, about = "Topological features and stress classification for physiological signals")]
struct Cli {
    /// JSON experiment configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed (overrides the config)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic corpus
    Synth,
    /// Compute window features from the corpus
    Extract,
    /// Cross-validate a classifier on the window features
    Evaluate,
    /// Run synth, extract and evaluate in turn
    All,
}

fn run(cli: Cli) -> topostress::Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    cfg.validate()?;
    if let Some(n) = cfg.workers {
        if !par::set_workers(n) && par::is_parallel() {
            log::warn!("worker pool already initialised, ignoring --workers {n}");
        }
    }
    match cli.command {
        Command::Synth => {
            let m = cmd_synth(&cfg)?;
            println!("wrote {} subjects to {}", m.subjects.len(), cfg.corpus_dir().display());
        }
        Command::Extract => {
            let e = cmd_extract(&cfg)?;
            println!(
                "wrote {} windows x {} columns to {}",
                e.matrix.n_rows(),
                e.matrix.n_cols(),
                cfg.features_csv().display()
            );
        }
        Command::Evaluate => print!("{}", io::summary_table(&cmd_evaluate(&cfg)?.report)),
        Command::All => print!("{}", io::summary_table(&cmd_all(&cfg)?.report)),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
