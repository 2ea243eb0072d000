use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tqsim_cli::config::{load_config_file, FlagOverrides, PartialConfig, RunConfig};
use tqsim_cli::run;
use tqsim_cli::CliError;

/// Open-system dynamics of two capacitively coupled transmon qutrits.
#[derive(Parser)]
#[command(name = "tqsim", version, about)]
struct Cli {
    /// TOML run configuration; flags override its keys.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory (default: $TQSIM_OUT_DIR, then the working directory).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    overrides: FlagOverrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write the measured time series.
    Simulate,
    /// Tabulate peak and final measures across coupling strengths.
    SweepGamma {
        /// Comma-separated coupling values, one trajectory each.
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.15,0.2")]
        gammas: Vec<f64>,
    },
    /// Random search over separable initial states for the largest
    /// entanglement generating power.
    OptimizePower {
        /// Number of sampled initial states.
        #[arg(long, default_value_t = 200)]
        n_samples: usize,
        /// Upper limit of the power integral (default: t_max).
        #[arg(long)]
        horizon: Option<f64>,
        /// Comma-separated sample families; default is all of
        /// pure_product_qubit, pure_product_qutrit, mixed_product,
        /// mixed_separable.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
        /// Convex terms per mixed_separable sample.
        #[arg(long, default_value_t = 3)]
        mix_terms: usize,
    },
    /// Evaluate the configured initial state's generating power.
    EvalState {
        /// Upper limit of the power integral (default: t_max).
        #[arg(long)]
        horizon: Option<f64>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };

    match dispatch(cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<Vec<PathBuf>, CliError> {
    let file = match &cli.config {
        Some(path) => load_config_file(path)?,
        None => PartialConfig::default(),
    };
    let cfg = RunConfig::resolve(file, &cli.overrides)?;

    let out_dir = run::resolve_out_dir(cli.out_dir.clone());
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", out_dir.display())))?;

    match &cli.command {
        Command::Simulate => run::simulate(&cfg, &out_dir),
        Command::SweepGamma { gammas } => run::sweep_gamma(&cfg, gammas, &out_dir),
        Command::OptimizePower {
            n_samples,
            horizon,
            kinds,
            mix_terms,
        } => run::optimize(&cfg, *n_samples, *horizon, kinds, *mix_terms, &out_dir),
        Command::EvalState { horizon } => run::eval_state(&cfg, *horizon, &out_dir),
    }
}
