use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dg_gauge::cli::{load_config, run, RunOptions};

/// Run a JSON-configured gauge experiment.
#[derive(Parser)]
#[command(name = "dg-gauge", version)]
struct Args {
    /// Path to the JSON config document.
    config: PathBuf,
    /// Seed for randomized verification.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory prepended to the configured output prefix.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = load_config(&args.config)
        .and_then(|cfg| run(&cfg, &RunOptions { seed: args.seed, output_dir: args.output }));
    match outcome {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("dg-gauge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
