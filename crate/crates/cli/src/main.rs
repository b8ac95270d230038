use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use brw_core::config::RunConfig;
use brw_core::Error;

mod commands;

/// Type-II down-conversion in AlGaAs Bragg reflection waveguides.
#[derive(Debug, Parser)]
#[command(name = "brw", version)]
struct Cli {
    /// Run configuration (TOML). Defaults to the built-in reference design.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory; overrides `output.directory`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Optimizer seed; overrides `optimizer.seed`.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the pump, signal and idler modes.
    Modes,
    /// Joint spectral amplitude and its width.
    Jsa,
    /// Per-channel polarization entanglement on the WDM grid.
    Channels,
    /// Coupling constant, effective area, fiber coupling and pair rate.
    Rate,
    /// Genetic search for a phase- and group-velocity-matched stack.
    Optimize,
    /// Spectrum and channel count under a relative change of one stack field.
    Sensitivity {
        /// Stack field, e.g. core_al_fraction; overrides `sensitivity.parameter`.
        #[arg(long)]
        parameter: Option<String>,
        /// Relative changes; overrides `sensitivity.deltas`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        deltas: Option<Vec<f64>>,
    },
}

fn load_config(cli: &Cli) -> brw_core::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::reference(),
    };
    if let Some(seed) = cli.seed {
        cfg.optimizer.seed = seed;
    }
    if let Command::Sensitivity { parameter, deltas } = &cli.command {
        if let Some(p) = parameter {
            cfg.sensitivity.parameter = p.clone();
        }
        if let Some(d) = deltas {
            cfg.sensitivity.deltas = d.clone();
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> brw_core::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    let cfg = load_config(cli)?;
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| Path::new(&cfg.output.directory).to_path_buf());
    match cli.command {
        Command::Modes => commands::modes(&cfg, &out),
        Command::Jsa => commands::jsa(&cfg, &out),
        Command::Channels => commands::channels(&cfg, &out),
        Command::Rate => commands::rate(&cfg, &out),
        Command::Optimize => commands::optimize(&cfg, &out),
        Command::Sensitivity { .. } => commands::sensitivity(&cfg, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
