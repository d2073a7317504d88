//! `umbra`: JSON in, JSON out front end for the resummation pipeline.
//!
//! Exit status: 0 on success, 1 on I/O, usage and parse errors, 2 on
//! mathematical obstructions (poles on the ray, divergence without `--resum`,
//! quadrature failure, failed verification).

mod commands;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use umbra_core::UmbraError;

#[derive(Parser, Debug)]
#[command(
    name = "umbra",
    version,
    about = "Gevrey classification, Borel-Laplace resummation and umbral images"
)]
pub struct Cli {
    /// Read input JSON from this file instead of stdin.
    #[arg(short = 'i', long = "in", global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Write result JSON to this file instead of stdout.
    #[arg(short = 'o', long = "out", global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Pretty-print the result JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit the Gevrey index of a series.
    Classify(ClassifyArgs),
    /// Formal Borel transform of order k.
    Borel(BorelArgs),
    /// Numerical Laplace transform of a Borel-plane series.
    Laplace(LaplaceArgs),
    /// Borel-Pade-Laplace resummation.
    Resum(ResumArgs),
    /// Umbral image of a built-in or supplied series.
    Umbral(UmbralArgs),
    /// Gaussian Fourier transform through the lambda umbra.
    Gaussft(GaussftArgs),
    /// Run the regression checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ClassifyArgs {
    /// Fit window as `lo,hi` (default: N/2,N).
    #[arg(long, value_parser = commands::parse_window)]
    pub window: Option<(usize, usize)>,
    /// |sigma| below this is reported as convergent class.
    #[arg(long, default_value_t = 0.1)]
    pub threshold: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct BorelArgs {
    #[arg(long)]
    pub k: f64,
    /// Shift `re[,im]`; 1 gives the unshifted transform.
    #[arg(long, value_parser = commands::parse_complex, allow_hyphen_values = true)]
    pub beta: Option<umbra_core::Complex64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct LaplaceArgs {
    #[arg(long)]
    pub k: f64,
    #[arg(long, value_parser = commands::parse_complex, default_value = "1", allow_hyphen_values = true)]
    pub beta: umbra_core::Complex64,
    /// Ray angle; defaults to arg t at each point.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Evaluation point `re[,im]`; repeatable.
    #[arg(long = "t", value_parser = commands::parse_complex, required = true, allow_hyphen_values = true)]
    pub t: Vec<umbra_core::Complex64>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct ResumArgs {
    #[arg(long)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Diagonal Pade order m of [m/m].
    #[arg(long = "order", default_value_t = 10)]
    pub pade_order: usize,
    #[arg(long = "t", value_parser = commands::parse_complex, required = true, allow_hyphen_values = true)]
    pub t: Vec<umbra_core::Complex64>,
    /// Angular exclusion zone for Pade poles around the ray.
    #[arg(long, default_value_t = 1e-3)]
    pub delta_ray: f64,
    /// Resum even when the series classifies as convergent.
    #[arg(long)]
    pub force: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct UmbralArgs {
    /// exp | expneg | expi | geom | geom-alt | custom-json (series from input).
    #[arg(long = "f")]
    pub f: String,
    #[arg(long)]
    pub mu: f64,
    /// lambda | phi:a,b | psi:a,b,g | custom:PATH.
    #[arg(long)]
    pub ground: String,
    /// Convergence radius of a custom ground series.
    #[arg(long, default_value_t = f64::INFINITY)]
    pub ground_radius: f64,
    #[arg(long = "N", default_value_t = 64)]
    pub n: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct GaussftArgs {
    /// gaussian:a | abs-exp | hermite:n | custom-json (transform series from input).
    #[arg(long = "input")]
    pub spec: String,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    /// Resum when the series is divergent.
    #[arg(long)]
    pub resum: bool,
    /// Truncation (default 400 for gaussian, 120 otherwise).
    #[arg(long = "N")]
    pub n: Option<usize>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {}

/// Failure with its exit status and machine-readable code.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Math(UmbraError),
    /// Domain failure that has no library error variant.
    Domain {
        code: &'static str,
        detail: String,
    },
}

impl From<UmbraError> for CliError {
    fn from(e: UmbraError) -> Self {
        CliError::Math(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 1,
            CliError::Math(e) if e.is_input_error() => 1,
            CliError::Math(_) | CliError::Domain { .. } => 2,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Io(d) => json!({"error": "IoError", "detail": d}),
            CliError::Parse(d) => json!({"error": "ParseError", "detail": d}),
            CliError::Math(e) => json!({"error": e.code(), "detail": e.to_string()}),
            CliError::Domain { code, detail } => json!({"error": code, "detail": detail}),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads the input JSON from `--in` or stdin.
pub fn read_input(path: &Option<PathBuf>) -> CliResult<String> {
    match path {
        Some(p) => {
            std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_output(cli: &Cli, value: &Value) -> CliResult<()> {
    let text = if cli.pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    match &cli.output {
        Some(p) => std::fs::write(p, text + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result =
        commands::run(&cli).and_then(|(value, status)| write_output(&cli, &value).map(|_| status));
    match result {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
