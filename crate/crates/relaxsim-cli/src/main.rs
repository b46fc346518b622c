use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use relaxsim::circuit::CircuitKind;
use relaxsim::redfield::{SpectralDensities, StateKind};
use relaxsim_cli::config::{resolve_config, FileConfig, Model, SweepOverrides};
use relaxsim_cli::{
    compare_report, dump, load_records, run_sweep, sudden_death_scan, CliError, SweepConfig,
};

/// Spin-3/2 quadrupolar relaxation simulator.
#[derive(Parser)]
#[command(name = "relaxsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a time sweep across the requested models and write CSV/JSON records.
    Sweep(SweepArgs),
    /// Compare emitted record files model-by-model; exits 2 above tolerance.
    Compare(CompareArgs),
    /// Locate the entanglement sudden-death time of the Bell state.
    SuddenDeath(SuddenDeathArgs),
    /// Print the Kraus operators and Choi eigenvalues of a channel.
    KrausDump(KrausDumpArgs),
    /// Print the gate listing of a dilation circuit.
    CircuitDump(CircuitDumpArgs),
}

#[derive(Args)]
struct SpectralFlags {
    /// Spectral density J0 in seconds [default: 1.4e-8].
    #[arg(long)]
    j0: Option<f64>,
    /// Spectral density J1 in seconds [default: 3.4e-9].
    #[arg(long)]
    j1: Option<f64>,
    /// Spectral density J2 in seconds [default: 3.7e-9].
    #[arg(long)]
    j2: Option<f64>,
    /// Coupling coefficient C in 1/s^2 [default: 1.2e10].
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Optional TOML/JSON config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    spectral: SpectralFlags,
    /// Initial state: label00..label11, uniform, or bell [default: uniform].
    #[arg(long)]
    state: Option<String>,
    /// Pseudo-pure polarization in (0, 1] [default: 1].
    #[arg(long)]
    epsilon: Option<f64>,
    /// Sweep horizon in seconds [default: 0.05].
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of uniformly spaced time points [default: 101].
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated subset of redfield,channel,circuit [default: redfield,channel].
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json [default: csv].
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    /// Record files to compare (CSV or JSON); repeatable.
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Maximum allowed per-element discrepancy [default: 1e-9].
    #[arg(long)]
    tolerance: Option<f64>,
    /// Optional config file supplying the tolerance.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SuddenDeathArgs {
    #[command(flatten)]
    spectral: SpectralFlags,
    /// Scan horizon in seconds [default: 0.1].
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of grid points [default: 1001].
    #[arg(long)]
    steps: Option<usize>,
    /// Disable both local damping channels, leaving only global dephasing.
    #[arg(long)]
    gpd_only: bool,
}

#[derive(Args)]
struct KrausDumpArgs {
    /// Channel name: gad, pd, gpd, or quadrupolar.
    #[arg(long)]
    channel: String,
    /// Channel parameters as key=value pairs, e.g. gamma=0.3,p=0.5.
    #[arg(long, default_value = "")]
    params: String,
    #[command(flatten)]
    spectral: SpectralFlags,
}

#[derive(Args)]
struct CircuitDumpArgs {
    /// Circuit kind: ad, excite, gad, pd, bloch, gpd, or quadrupolar.
    #[arg(long)]
    kind: String,
    /// Circuit parameters as key=value pairs, e.g. lambda=0.8 or t=0.01.
    #[arg(long, default_value = "")]
    params: String,
    #[command(flatten)]
    spectral: SpectralFlags,
}

fn spectral_from_flags(flags: &SpectralFlags) -> Result<SpectralDensities, CliError> {
    let d = SpectralDensities::sodium_defaults();
    SpectralDensities::new(
        flags.j0.unwrap_or(d.j0),
        flags.j1.unwrap_or(d.j1),
        flags.j2.unwrap_or(d.j2),
        flags.c.unwrap_or(d.c),
    )
    .map_err(CliError::Lib)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let file = match &args.config {
                Some(path) => FileConfig::load(path)?,
                None => FileConfig::default(),
            };
            let overrides = SweepOverrides {
                j0: args.spectral.j0,
                j1: args.spectral.j1,
                j2: args.spectral.j2,
                c: args.spectral.c,
                state: args.state,
                epsilon: args.epsilon,
                t_max: args.t_max,
                steps: args.steps,
                models: args.models,
                out: args.out,
                format: args.format,
            };
            let cfg = resolve_config(&overrides, &file)?;
            let records = run_sweep(&cfg)?;
            match &cfg.output_path {
                Some(path) => eprintln!(
                    "wrote {} records ({} models x {} times) to {}",
                    records.len(),
                    cfg.sorted_models().len(),
                    cfg.steps,
                    path.display()
                ),
                None => eprintln!(
                    "computed {} records (no --out given, nothing written)",
                    records.len()
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare(args) => {
            let file = match &args.config {
                Some(path) => FileConfig::load(path)?,
                None => FileConfig::default(),
            };
            let tolerance = args.tolerance.or(file.tolerance).unwrap_or(1e-9);
            let mut records = Vec::new();
            for path in &args.inputs {
                records.extend(load_records(path)?);
            }
            let report = compare_report(&records)?;
            print!("{}", report.render());
            if report.exceeds(tolerance) {
                eprintln!(
                    "tolerance violation: max discrepancy {:.3e} > {tolerance:.3e}",
                    report.max_discrepancy()
                );
                Ok(ExitCode::from(2))
            } else {
                println!("all discrepancies within tolerance {tolerance:.3e}");
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::SuddenDeath(args) => {
            let cfg = SweepConfig {
                spectral: spectral_from_flags(&args.spectral)?,
                state_kind: StateKind::Bell,
                epsilon: 1.0,
                t_max: args.t_max.unwrap_or(0.1),
                steps: args.steps.unwrap_or(1001),
                models: vec![Model::Channel],
                output_path: None,
                output_format: relaxsim_cli::OutputFormat::Csv,
                gpd_only: args.gpd_only,
            };
            let outcome = sudden_death_scan(&cfg)?;
            println!("{}", outcome.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::KrausDump(args) => {
            let sd = spectral_from_flags(&args.spectral)?;
            let params = dump::parse_params(&args.params)?;
            print!("{}", dump::kraus_dump(&args.channel, &params, &sd)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::CircuitDump(args) => {
            let sd = spectral_from_flags(&args.spectral)?;
            let params = dump::parse_params(&args.params)?;
            let kind = CircuitKind::from_str(&args.kind).map_err(CliError::Lib)?;
            print!("{}", dump::circuit_dump(kind, &params, &sd)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are not usage errors.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
