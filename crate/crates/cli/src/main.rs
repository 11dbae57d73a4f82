use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sdym_cli::{emit, run, CliError, Command, Format, RunConfig};

#[derive(Parser)]
#[command(name = "sdym", version, about = "Self-dual Yang–Mills verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Seed for randomized sweeps; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for grid sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Reducible connection from a harmonic function.
    Reducible,
    /// Penrose transform of a twistor representative.
    Penrose,
    /// Abelian patching matrix and its twistor relations.
    Patch,
    /// Birkhoff split and Yang–Pohlmeyer check on a grid.
    Split,
    /// Flat-orbit flow with per-time pipeline residuals.
    Flow,
    /// Finite-type chain of a harmonic function.
    FiniteType,
    /// Orbit classification of constant group elements.
    Orbit,
    /// Seeded sweep over all modules.
    Selftest,
}

#[derive(ValueEnum, Clone, Copy)]
enum OutFormat {
    Json,
    Csv,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Reducible => Command::Reducible,
            Cmd::Penrose => Command::Penrose,
            Cmd::Patch => Command::Patch,
            Cmd::Split => Command::Split,
            Cmd::Flow => Command::Flow,
            Cmd::FiniteType => Command::FiniteType,
            Cmd::Orbit => Command::Orbit,
            Cmd::Selftest => Command::Selftest,
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let report = run(cli.command.into(), &cfg)?;
    let format = match cli.format {
        OutFormat::Json => Format::Json,
        OutFormat::Csv => Format::Csv,
    };
    let text = emit(&report, format);
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(report.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("sdym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
