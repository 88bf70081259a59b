//! `nonmark`: simulate qubit dynamics in a bosonic reservoir and compute
//! trace-distance non-Markovianity measures.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::debug;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "nonmark", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. They override the config file.
#[derive(Args, Debug, Default)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Lorentzian width in units of gamma0.
    #[arg(long)]
    width_ratio: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Write the effective configuration to this file.
    #[arg(long)]
    save_config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Amplitude, population, distances and Bell-state concurrences over time.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Single-qubit, (|e>, |g>) and two-qubit lower-bound measures.
    Measure {
        #[command(flatten)]
        common: Common,
    },
    /// Measures over a range of Lorentzian widths.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        width_from: Option<f64>,
        #[arg(long)]
        width_to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Checks D(t) <= |b(t)| on random initial pairs.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Scales the bound |b|; below one it must produce violations.
        #[arg(long, hide = true, default_value_t = 1.0)]
        fault_scale: f64,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate { common }
            | Command::Measure { common }
            | Command::Sweep { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Simulate { .. } | Command::Sweep { .. } => Format::Csv,
            Command::Measure { .. } | Command::Verify { .. } => Format::Json,
        }
    }
}

fn effective_config(cmd: &Command) -> Result<RunConfig, CliError> {
    let common = cmd.common();
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &common.out {
        cfg.output.path = Some(v.clone());
    }
    if let Some(v) = common.format {
        cfg.output.format = Some(v);
    }
    if let Some(v) = common.jobs {
        cfg.output.jobs = Some(v);
    }
    if let Some(v) = common.width_ratio {
        cfg.model.width_ratio = v;
    }
    if let Some(v) = common.dt {
        cfg.solver.dt = v;
    }
    if let Some(v) = common.t_max {
        cfg.solver.t_max = Some(v);
    }
    match cmd {
        Command::Sweep { width_from, width_to, steps, .. } => {
            if let Some(v) = width_from {
                cfg.sweep.width_from = *v;
            }
            if let Some(v) = width_to {
                cfg.sweep.width_to = *v;
            }
            if let Some(v) = steps {
                cfg.sweep.steps = *v;
            }
        }
        Command::Verify { samples, seed, .. } => {
            if let Some(v) = samples {
                cfg.verify.samples = *v;
            }
            if let Some(v) = seed {
                cfg.verify.seed = *v;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn run(cmd: &Command) -> Result<(), CliError> {
    let cfg = effective_config(cmd)?;
    if let Some(path) = &cmd.common().save_config {
        std::fs::write(path, cfg.to_toml())?;
    }
    let format = cfg.output.format.unwrap_or(cmd.default_format());
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.output.jobs {
        if jobs == 0 {
            return Err(CliError::Config("jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;

    let output = pool.install(|| match cmd {
        Command::Simulate { .. } => commands::simulate(&cfg, format),
        Command::Measure { .. } => commands::measure(&cfg, format),
        Command::Sweep { .. } => commands::sweep(&cfg, format),
        Command::Verify { fault_scale, .. } => commands::verify(&cfg, format, *fault_scale),
    })?;

    match &cfg.output.path {
        Some(path) => std::fs::write(path, &output.text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(output.text.as_bytes()).and_then(|_| stdout.flush());
            match written {
                // A closed pipe (`nonmark simulate | head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    match output.failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NM_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            debug!("exit code {}", e.exit_code());
            eprintln!("nonmark: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
