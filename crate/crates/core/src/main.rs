use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use metascope::config::{Scenario, ScenarioConfig};
use metascope::runner::{check_command, run};

#[derive(Parser)]
#[command(name = "metascope", version, about = "1-bit reflective metasurface toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master RNG seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Disable receiver noise (direction finding only).
    #[arg(long)]
    noiseless: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Vortex-beam codings, far/near fields and mode spectra.
    Oam(RunArgs),
    /// Pencil-beam scanning, gain and sidelobes, frequency sweep.
    Scan(RunArgs),
    /// Time-modulated direction finding sweep.
    Df(RunArgs),
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match cli.command {
        Command::Oam(a) => ("oam", a),
        Command::Scan(a) => ("scan", a),
        Command::Df(a) => ("df", a),
    };
    let mut config = match ScenarioConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("metascope: config error: {}: {e}", args.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Err(e) = check_command(&config, name) {
        eprintln!("metascope: config error: {}: {e}", args.config.display());
        return ExitCode::from(EXIT_CONFIG);
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.noiseless {
        if let Scenario::Df(df) = &mut config.scenario {
            df.noiseless = true;
        }
    }
    let out = args
        .out
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("metascope_out"));
    match run(&config, &out) {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            println!("wrote {} files to {}", report.files.len(), out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("metascope: error: {e}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}
