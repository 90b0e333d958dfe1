//! `casimir`: batch front-end for spectra, heat-kernel coefficients, spectral
//! zeta functions and Casimir free energies.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse error, 3 validation error,
//! 4 numeric failure or tolerance exceeded, 5 `verify` found a failing check.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::config::{ConfigError, Format};
use crate::report::Header;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] casimir_core::Error),
    #[error("tolerance exceeded: {0}")]
    Tolerance(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use casimir_core::Error as E;
        match self {
            Self::Config(ConfigError::Parse(_)) => 2,
            Self::Config(ConfigError::Io { .. }) => 1,
            Self::Config(ConfigError::Invalid(_)) => 3,
            Self::Core(
                E::InvalidGeometry(_)
                | E::InvalidScale(_)
                | E::DegenerateShell(_)
                | E::CornerContribution
                | E::FormDegree { .. }
                | E::Unsupported(_),
            ) => 3,
            Self::Core(_) | Self::Tolerance(_) => 4,
            Self::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Casimir free energies from spectra, heat kernels and zeta functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Run options shared by every subcommand. Flags override config keys.
#[derive(Args, Debug, Clone, Default)]
struct RunArgs {
    /// TOML run configuration
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set geometry.length=2 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    bc: Option<String>,
    /// scalar, p-form or electromagnetic
    #[arg(long)]
    field: Option<String>,
    /// Replaces the temperature list (repeatable)
    #[arg(long = "temperature", short = 'T', allow_negative_numbers = true)]
    temperatures: Vec<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    /// Output file; stdout when absent
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Eigenfrequencies up to omega_max
    Spectrum(RunArgs),
    /// Heat trace samples and fitted coefficients
    HeatKernel(RunArgs),
    /// Closed-form heat coefficients
    Coefficients(RunArgs),
    /// ζ(0), ζ′(0) and the finite part and residue at s = −1/2
    Zeta(RunArgs),
    /// Regularized free energy over the temperature list
    FreeEnergy(RunArgs),
    /// High-temperature term table
    Asymptotics(RunArgs),
    /// Cavity-shell energies, Q and divergence order
    Shell(RunArgs),
    /// Run the built-in invariant suite
    Verify(RunArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Spectrum(_) => "spectrum",
            Self::HeatKernel(_) => "heat-kernel",
            Self::Coefficients(_) => "coefficients",
            Self::Zeta(_) => "zeta",
            Self::FreeEnergy(_) => "free-energy",
            Self::Asymptotics(_) => "asymptotics",
            Self::Shell(_) => "shell",
            Self::Verify(_) => "verify",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Self::Spectrum(a)
            | Self::HeatKernel(a)
            | Self::Coefficients(a)
            | Self::Zeta(a)
            | Self::FreeEnergy(a)
            | Self::Asymptotics(a)
            | Self::Shell(a)
            | Self::Verify(a) => a,
        }
    }
}

impl RunArgs {
    /// --set pairs followed by the named flags, which win.
    fn overrides(&self) -> Result<Vec<(String, String)>, ConfigError> {
        let mut out = Vec::new();
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| ConfigError::Parse(format!("--set expects KEY=VALUE, got '{kv}'")))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let quoted = |s: &str| format!("{s:?}");
        if let Some(bc) = &self.bc {
            out.push(("bc".into(), quoted(bc)));
        }
        if let Some(f) = &self.field {
            out.push(("field".into(), quoted(f)));
        }
        if !self.temperatures.is_empty() {
            let list: Vec<String> = self.temperatures.iter().map(|t| format!("{t:?}")).collect();
            out.push(("temperatures".into(), format!("[{}]", list.join(", "))));
        }
        if let Some(mu) = self.mu {
            out.push(("mu".into(), format!("{mu:?}")));
        }
        if let Some(w) = self.omega_max {
            out.push(("omega_max".into(), format!("{w:?}")));
        }
        if let Some(f) = &self.format {
            out.push(("output.format".into(), quoted(f)));
        }
        if let Some(p) = &self.output {
            out.push(("output.path".into(), quoted(&p.display().to_string())));
        }
        Ok(out)
    }
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("CASIMIR_THREADS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| ConfigError::Invalid(format!("CASIMIR_THREADS must be a positive integer, got '{raw}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| ConfigError::Invalid(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn check_tolerances(cfg: &config::Tolerances, headline: &commands::Headline) -> Result<(), CliError> {
    for (name, e) in headline {
        if let Some(max) = cfg.max_bound {
            if !(e.bound <= max) {
                return Err(CliError::Tolerance(format!("{name}: bound {:.3e} exceeds max_bound {max:.3e}", e.bound)));
            }
        }
        if let Some(max) = cfg.max_relative_bound {
            if !(e.bound <= max * e.value.abs()) {
                return Err(CliError::Tolerance(format!(
                    "{name}: relative bound {:.3e} exceeds max_relative_bound {max:.3e}",
                    e.bound / e.value.abs()
                )));
            }
        }
    }
    Ok(())
}

fn write(out: &report::Output, format: Format, path: Option<&std::path::Path>) -> Result<(), CliError> {
    for p in out.write(format, path)? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    let args = cli.command.args();
    let overrides = args.overrides()?;
    if let Command::Verify(_) = cli.command {
        // the suite is fixed; only output settings are read from the flags
        let format = match args.format.as_deref() {
            Some("csv") => Format::Csv,
            _ => Format::Json,
        };
        let hash = {
            use sha2::{Digest, Sha256};
            hex::encode(Sha256::digest(b""))
        };
        let (out, passed) = commands::verify(Header::new("verify", hash));
        write(&out, format, args.output.as_deref())?;
        for c in out.body["checks"].as_array().into_iter().flatten() {
            eprintln!(
                "{} {}: {}",
                if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" },
                c["name"].as_str().unwrap_or_default(),
                c["detail"].as_str().unwrap_or_default()
            );
        }
        return Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(5) });
    }
    let config = config::load(args.config.as_deref(), &overrides)?;
    let resolved = config.resolve()?;
    let header = Header::new(cli.command.name(), config.hash());
    let ctx = commands::Ctx { config: &config, resolved, header };
    let started = std::time::Instant::now();
    let (out, headline) = match cli.command {
        Command::Spectrum(_) => commands::spectrum(&ctx)?,
        Command::HeatKernel(_) => commands::heat_kernel(&ctx)?,
        Command::Coefficients(_) => commands::coefficients(&ctx)?,
        Command::Zeta(_) => commands::zeta(&ctx)?,
        Command::FreeEnergy(_) => commands::free_energy(&ctx)?,
        Command::Asymptotics(_) => commands::asymptotics(&ctx)?,
        Command::Shell(_) => commands::shell(&ctx)?,
        Command::Verify(_) => unreachable!(),
    };
    log::debug!("{} finished in {:.2?}", cli.command.name(), started.elapsed());
    let path = config.output.path.as_deref().map(std::path::Path::new);
    write(&out, config.output.format, path)?;
    check_tolerances(&config.tolerances, &headline)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
