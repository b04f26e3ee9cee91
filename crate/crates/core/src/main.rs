use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use latdisc::experiments::{run_mode, ExperimentConfig, Mode, ThetaSampling};
use latdisc::Error;

/// Lattice-point discrepancy experiments.
///
/// Modes: scaling, randol, fourier-profile, poisson-sandwich, vdc.
/// Exit status: 0 success, 2 threshold failure, 1 usage or runtime error.
#[derive(Parser, Debug)]
#[command(name = "latdisc", version)]
struct Cli {
    /// Experiment mode
    mode: String,
    /// Domain spec, e.g. "superellipse:omega=4,a=1,b=1"
    #[arg(long, default_value = "superellipse:omega=4")]
    domain: String,
    /// Number of seeded random rotations
    #[arg(long, default_value_t = 1)]
    theta_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit comma-separated rotations (overrides --theta-count)
    #[arg(long, value_delimiter = ',')]
    thetas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 6)]
    jmin: u32,
    #[arg(long, default_value_t = 14)]
    jmax: u32,
    /// Samples per dyadic block (per decade for fourier-profile)
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Output CSV path (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// File of `key = value` lines overriding the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, Error> {
    let mode: Mode = cli.mode.parse()?;
    let mut config = ExperimentConfig {
        mode,
        domain: cli.domain.parse().map_err(|e: Error| Error::Usage(e.to_string()))?,
        thetas: match cli.thetas {
            Some(v) => ThetaSampling::List(v),
            None => ThetaSampling::Random {
                count: cli.theta_count,
                seed: cli.seed,
            },
        },
        jmin: cli.jmin,
        jmax: cli.jmax,
        samples: cli.samples,
        out: cli.out,
    };
    if let Some(path) = cli.config {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        config.apply_config_text(&text)?;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let config = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("latdisc: {e}");
            return ExitCode::from(1);
        }
    };
    let output = match run_mode(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("latdisc: {e}");
            return ExitCode::from(1);
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &output.csv) {
                eprintln!("latdisc: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", output.csv),
    }
    eprintln!("latdisc: {}", output.summary);
    if output.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
