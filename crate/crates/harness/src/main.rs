use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fec_harness::config::ExperimentConfig;
use fec_harness::output::read_table;
use fec_harness::{measure_gain, run_sweep, validate, HarnessError};

/// Bit error rate experiments for eBCH product and staircase codes.
#[derive(Parser)]
#[command(name = "fecsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config (TOML).
    #[arg(short, long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for one per CPU.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory.
    #[arg(short, long, default_value = "results")]
    out: PathBuf,
    /// Base name of the output files, defaults to the config file stem.
    #[arg(long)]
    name: Option<String>,
    /// Replace the Eb/N0 list of the config (comma separated, dB).
    #[arg(long, value_delimiter = ',')]
    ebn0: Option<Vec<f64>>,
    #[arg(long)]
    min_errors: Option<u64>,
    #[arg(long)]
    max_bits: Option<u64>,
    /// Trials per stopping-rule check.
    #[arg(long)]
    batch: Option<u64>,
    /// Collect at least 1e5 bit errors per point with no bit budget.
    #[arg(long, conflicts_with_all = ["min_errors", "max_bits"])]
    full_statistics: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BER sweep and write `<name>.txt` plus a metadata sidecar.
    Sweep(SweepArgs),
    /// Gain in dB of curve B over curve A at a target BER.
    Gain {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        target: f64,
    },
    /// Run the oracle and invariant self-checks.
    Validate,
}

fn sweep(args: SweepArgs) -> Result<(), HarnessError> {
    let SweepArgs {
        config,
        seed,
        workers,
        out,
        name,
        ebn0,
        min_errors,
        max_bits,
        batch,
        full_statistics,
    } = args;
    let mut cfg = ExperimentConfig::load(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if let Some(points) = ebn0 {
        cfg.ebn0_db = points;
    }
    if let Some(e) = min_errors {
        cfg.min_bit_errors = e;
    }
    if let Some(b) = max_bits {
        cfg.max_bits = b;
    }
    if let Some(b) = batch {
        cfg.batch = b;
    }
    if full_statistics {
        cfg.min_bit_errors = 100_000;
        cfg.max_bits = u64::MAX;
    }
    let name = name.unwrap_or_else(|| {
        config
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "sweep".into())
    });
    let outcome = run_sweep(&cfg, &out, &name)?;
    for r in &outcome.records {
        eprintln!(
            "Eb/N0 {:>6} dB  BER {:.3e}  errors {:>8}  bits {:>12}  {:.1}s{}",
            r.ebn0_db,
            r.ber,
            r.bit_errors,
            r.bits_counted,
            r.wall_time_s,
            if r.censored { "  (censored)" } else { "" }
        );
    }
    println!("{}", outcome.files.table.display());
    if outcome.records.iter().all(|r| r.censored) {
        return Err(HarnessError::AllCensored);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Gain { a, b, target } => {
            let g = measure_gain(&read_table(&a)?, &read_table(&b)?, target)?;
            println!("{g:.4}");
            Ok(())
        }
        Command::Validate => {
            let results = validate::run_checks();
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(HarnessError::Validation)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fecsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
