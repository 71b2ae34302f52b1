//! Batch front-end: generate data, fit models, run noise sweeps, and emit
//! result tables and static figures. Every command writes a manifest that is
//! sufficient to reproduce its outputs byte for byte (`rlda rerun`).

mod commands;
mod error;
mod manifest;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::demo::{self, DemoConfig};
use commands::fit::{self, FitConfig, InitName, MethodName};
use commands::sweep::{self, DataSource, SweepConfig};
use commands::synth::{self, SynthConfig, SynthMode};
use error::CliError;

#[derive(Parser)]
#[command(name = "rlda", version, about = "Robust linear discriminant analysis toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset with outlier ground truth.
    Synth(SynthArgs),
    /// Fit a projection model to a CSV dataset.
    Fit(FitArgs),
    /// Cross-validated accuracy over a label-noise sweep.
    Sweep(SweepArgs),
    /// Two-cluster toy demo: scatter figure plus direction angles.
    DemoToy(DemoArgs),
    /// Re-execute a command from its manifest.
    Rerun(RerunArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Named preset ("fig1": two clusters with far-off outliers).
    #[arg(long)]
    preset: Option<String>,
    /// Outliers per class (preset mode only).
    #[arg(long)]
    outliers: Option<usize>,
    #[arg(long)]
    classes: Option<usize>,
    #[arg(long = "per-class")]
    per_class: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 8.0)]
    separation: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Zero-based label column index; the last column when omitted.
    #[arg(long = "label-column")]
    label_column: Option<usize>,
    #[arg(long, value_enum)]
    method: MethodName,
    /// Reduced dimension; defaults to c-1 for lda and 3c for trlda/rlda.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 100)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = InitName::Warmstart)]
    init: InitName,
    /// Model file whose projection seeds the fit (rlda warm start).
    #[arg(long = "warm-model")]
    warm_model: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, conflicts_with = "gen")]
    input: Option<PathBuf>,
    #[arg(long = "label-column")]
    label_column: Option<usize>,
    /// Generate blobs instead of loading: classes,per-class,dim,separation.
    #[arg(long)]
    gen: Option<String>,
    /// Comma-separated list from {lda, trlda, rlda}.
    #[arg(long, default_value = "lda,rlda")]
    methods: String,
    /// Noise fractions as start:end:step (inclusive).
    #[arg(long, default_value = "0:0.3:0.05")]
    noise: String,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reduced dimension override applied to every method.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    outliers: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RerunArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn resolve_synth(args: &SynthArgs) -> Result<SynthConfig, CliError> {
    let mode = match (&args.preset, args.classes) {
        (Some(name), None) => {
            if name != "fig1" {
                return Err(CliError::Usage(format!("unknown preset {name:?}")));
            }
            SynthMode::TwoClusterToy {
                outliers: args.outliers.unwrap_or(3),
            }
        }
        (None, Some(classes)) => {
            if args.outliers.is_some() {
                return Err(CliError::Usage(
                    "--outliers applies to preset mode only".into(),
                ));
            }
            SynthMode::Blobs {
                classes,
                per_class: args.per_class.unwrap_or(50),
                dim: args.dim.unwrap_or(10),
                separation: args.separation,
            }
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--preset and --classes are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Usage(
                "either --preset or --classes is required".into(),
            ))
        }
    };
    Ok(SynthConfig {
        mode,
        seed: args.seed,
    })
}

fn parse_noise_range(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "noise range must be start:end:step, got {text:?}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad noise bound {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if !(0.0..1.0).contains(&start) || !(0.0..1.0).contains(&end) || step < 0.0 {
        return Err(CliError::Usage(format!("noise range out of bounds: {text}")));
    }
    let mut levels = vec![start];
    if step > 0.0 {
        let mut k = 1usize;
        loop {
            let v = start + step * k as f64;
            if v > end + 1e-12 {
                break;
            }
            levels.push((v * 1e12).round() / 1e12);
            k += 1;
        }
    }
    Ok(levels)
}

fn resolve_sweep(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let source = match (&args.input, &args.gen) {
        (Some(path), None) => DataSource::Input {
            path: path.clone(),
            label_column: args.label_column,
        },
        (None, Some(spec)) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 4 {
                return Err(CliError::Usage(
                    "--gen expects classes,per-class,dim,separation".into(),
                ));
            }
            DataSource::Generated {
                classes: parts[0]
                    .parse()
                    .map_err(|_| CliError::Usage("bad class count".into()))?,
                per_class: parts[1]
                    .parse()
                    .map_err(|_| CliError::Usage("bad per-class count".into()))?,
                dim: parts[2]
                    .parse()
                    .map_err(|_| CliError::Usage("bad dimension".into()))?,
                separation: parts[3]
                    .parse()
                    .map_err(|_| CliError::Usage("bad separation".into()))?,
            }
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --input or --gen is required".into(),
            ))
        }
    };
    let methods = args
        .methods
        .split(',')
        .map(|name| match name.trim() {
            "lda" => Ok(MethodName::Lda),
            "trlda" => Ok(MethodName::Trlda),
            "rlda" => Ok(MethodName::Rlda),
            other => Err(CliError::Usage(format!("unknown method {other:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if methods.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    if args.folds < 2 {
        return Err(CliError::Usage("need at least 2 folds".into()));
    }
    if args.trials < 1 {
        return Err(CliError::Usage("need at least 1 trial".into()));
    }
    Ok(SweepConfig {
        source,
        methods,
        noise: parse_noise_range(&args.noise)?,
        folds: args.folds,
        trials: args.trials,
        seed: args.seed,
        dim: args.dim,
        epsilon: args.eps,
        tol: args.tol,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Synth(args) => {
            let config = resolve_synth(&args)?;
            synth::run(&config, &args.out)
        }
        Command::Fit(args) => {
            let config = FitConfig {
                input: args.input.clone(),
                label_column: args.label_column,
                method: args.method,
                dim: args.dim,
                epsilon: args.eps,
                tol: args.tol,
                max_iter: args.max_iter,
                seed: args.seed,
                init: args.init,
                warm_model: args.warm_model.clone(),
            };
            fit::run(&config, &args.out)
        }
        Command::Sweep(args) => {
            let config = resolve_sweep(&args)?;
            sweep::run(&config, &args.out)
        }
        Command::DemoToy(args) => {
            let config = DemoConfig {
                seed: args.seed,
                outliers: args.outliers,
            };
            demo::run(&config, &args.out)
        }
        Command::Rerun(args) => commands::rerun(&args.manifest, &args.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
