use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pi_dissipativity::cli::{self, RunConfig};

#[derive(Parser)]
#[command(
    name = "pidiss",
    version,
    about = "Dissipativity analysis and tuning of MIMO-PI loops"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; the built-in benchmark profile when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for test utilities. The commands themselves are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Point-wise index over the heatmap region, plus W_K.
    Heatmap,
    /// Certified gain bound for the configured gains.
    Gamma,
    /// Sweep candidate gains and select the best.
    Tune,
    /// Closed-loop simulation and metrics.
    Simulate,
    /// Audit a stored trajectory against a stored report.
    Verify,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let run = || {
        let cfg = RunConfig::load(args.config.as_deref())?;
        match args.command {
            Command::Heatmap => cli::cmd_heatmap(&cfg, &args.out),
            Command::Gamma => cli::cmd_gamma(&cfg, &args.out),
            Command::Tune => cli::cmd_tune(&cfg, &args.out),
            Command::Simulate => cli::cmd_simulate(&cfg, &args.out),
            Command::Verify => cli::cmd_verify(&cfg, &args.out),
        }
    };
    let code = match run() {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("pidiss: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
