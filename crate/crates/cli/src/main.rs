use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod files;
mod manifest;

#[derive(Parser)]
#[command(name = "ldpc-lattice", version, about = "Design, encode, decode and simulate multilevel LDPC lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args, Clone, Default)]
pub struct Common {
    /// Key-value configuration file, or a manifest of an earlier run.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed; overrides `seed` from the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for outputs and the run manifest.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Worker threads for simulation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Full,
    Genie,
}

#[derive(Subcommand)]
enum Command {
    /// Build nested parity-check matrices and write a spec bundle.
    Design,
    /// Encode message bits into a lattice point.
    Encode {
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Message file: one bit row per level.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Multistage decoding of received values.
    Decode {
        #[arg(long)]
        bundle: Option<PathBuf>,
        /// Received values, whitespace separated.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Word-error-rate sweep on the unconstrained AWGN channel.
    Simulate {
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
    /// Rate design over a PEG code family.
    Rates,
    /// Convert a sweep CSV into plotting data, with optional reference curves.
    Report {
        /// Sweep CSV written by `simulate`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Two-column `vnr_db,wer` reference curves.
        #[arg(long = "reference")]
        references: Vec<PathBuf>,
    },
}

/// Exit status: 2 configuration, 3 design failure, 4 I/O or malformed data.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl std::fmt::Display) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
    pub fn design(message: impl std::fmt::Display) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
    pub fn io(message: impl std::fmt::Display) -> Self {
        Failure { code: 4, message: message.to_string() }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let c = &cli.common;
    let result = match cli.command {
        Command::Design => commands::design(c),
        Command::Encode { bundle, input } => commands::encode(c, bundle, input),
        Command::Decode { bundle, input, sigma } => commands::decode(c, bundle, input, sigma),
        Command::Simulate { bundle } => commands::simulate(c, bundle),
        Command::Rates => commands::rates(c),
        Command::Report { input, references } => commands::report(c, input, references),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
