use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlgas_cli::commands;
use qlgas_cli::config::{RawConfig, SimulationConfig};
use qlgas_cli::series::write_series;
use qlgas_cli::unitary_file::UnitarySource;
use qlgas_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "qlgas", version, about = "Hybrid quantum-classical lattice-gas simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write the CSV time series.
    Simulate(RunArgs),
    /// Run the quantum path against the classical oracle and report the largest deviation.
    Compare(RunArgs),
    /// Report the collision constraint and unitarity residual of a unitary.
    Check(UnitaryArg),
    /// Print the induced stochastic matrix with its row and column sums.
    Induce(UnitaryArg),
    /// Iterate the induced Markov chain from an initial distribution.
    Markov {
        #[command(flatten)]
        unitary: UnitaryArg,
        /// File of initial state probabilities.
        #[arg(long)]
        p0: PathBuf,
        #[arg(long, default_value_t = 10)]
        steps: u64,
    },
    /// Fit the diffusion coefficient of a CSV time series.
    Fit {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        t_min: u64,
        #[arg(long)]
        t_max: Option<u64>,
    },
}

#[derive(Args)]
struct UnitaryArg {
    /// File path, builtin:diffusion, builtin:violating or builtin:identity[:b].
    #[arg(long, default_value = "builtin:diffusion")]
    unitary: String,
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    unitary: Option<String>,
    /// pure, mixed or ensemble.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    members: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    record_every: Option<u64>,
    /// quantum or classical.
    #[arg(long)]
    engine: Option<String>,
}

impl RunArgs {
    fn config(&self) -> Result<SimulationConfig> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        let flags: [(&str, Option<String>); 9] = [
            ("unitary", self.unitary.clone()),
            ("mode", self.mode.clone()),
            ("members", self.members.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("steps", self.steps.map(|v| v.to_string())),
            ("length", self.length.map(|v| v.to_string())),
            ("out", self.out.as_ref().map(|p| p.to_string_lossy().into_owned())),
            ("record_every", self.record_every.map(|v| v.to_string())),
            ("engine", self.engine.clone()),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set(key, v);
            }
        }
        SimulationConfig::from_raw(&raw)
    }
}

fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = args.config()?;
            let series = commands::simulate(&cfg)?;
            match &cfg.out {
                Some(path) => {
                    let file =
                        std::fs::File::create(path).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
                    write_series(std::io::BufWriter::new(file), &series)?;
                    Ok(String::new())
                }
                None => {
                    let mut buf = Vec::new();
                    write_series(&mut buf, &series)?;
                    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
                }
            }
        }
        Command::Compare(args) => Ok(commands::format_deviation(&commands::compare(&args.config()?)?)),
        Command::Check(u) => Ok(commands::check_report(&UnitarySource::parse(&u.unitary)?.load()?)),
        Command::Induce(u) => Ok(commands::induce_report(&UnitarySource::parse(&u.unitary)?.load()?)),
        Command::Markov { unitary, p0, steps } => {
            let u = UnitarySource::parse(&unitary.unitary)?.load()?;
            let text = std::fs::read_to_string(&p0).map_err(|e| CliError::Io { path: p0.clone(), source: e })?;
            commands::markov_report(&u, &commands::parse_distribution(&text)?, steps)
        }
        Command::Fit { input, t_min, t_max } => {
            Ok(commands::format_fit(&commands::fit_file(&input, t_min, t_max.unwrap_or(u64::MAX))?))
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
