use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use uavfas_cli::config::{defaults_document, load_config, load_config_str, RunSpec};
use uavfas_cli::{apply_overrides, exit_code, Overrides};

/// Outage analysis for a UAV-relayed rate-splitting downlink with
/// fluid-antenna users: closed form, high-SNR asymptote and Monte Carlo.
#[derive(Parser)]
#[command(name = "uavfas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured scenario or sweep and emit CSV/SVG results.
    Run(CommonArgs),
    /// Run the validation gate suite against the configured scenario and
    /// emit a JSON report (nonzero exit on a blocking gate failure).
    Validate(CommonArgs),
    /// Print the built-in default configuration as a TOML document.
    Defaults,
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file (TOML); omitted means the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG chart output path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Monte Carlo trial count override.
    #[arg(long)]
    trials: Option<u64>,
    /// Monte Carlo seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated evaluation modes: exact, asymptotic, monte_carlo, noma.
    #[arg(long, value_delimiter = ',')]
    modes: Option<Vec<String>>,
    /// Evaluate the second hop with the literal source-model constants
    /// instead of the symmetric relay-powered form (audit mode).
    #[arg(long = "paper-literal-typos")]
    paper_literal_typos: bool,
}

fn build_spec(args: &CommonArgs) -> Result<RunSpec, i32> {
    let mut spec = match &args.config {
        Some(path) => load_config(path),
        None => load_config_str(""),
    }
    .map_err(|e| {
        eprintln!("error: {e}");
        exit_code::CONFIG
    })?;
    let overrides = Overrides {
        out: args.out.clone(),
        svg: args.svg.clone(),
        trials: args.trials,
        seed: args.seed,
        modes: args.modes.clone(),
        literal_second_hop: args.paper_literal_typos,
    };
    apply_overrides(&mut spec, &overrides).map_err(|e| {
        eprintln!("error: {e}");
        exit_code::CONFIG
    })?;
    Ok(spec)
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => match build_spec(&args) {
            Ok(spec) => uavfas_cli::run(&spec),
            Err(code) => code,
        },
        Command::Validate(args) => match build_spec(&args) {
            Ok(spec) => uavfas_cli::validate(&spec),
            Err(code) => code,
        },
        Command::Defaults => {
            print!("{}", defaults_document());
            exit_code::OK
        }
    };
    std::process::exit(code);
}
