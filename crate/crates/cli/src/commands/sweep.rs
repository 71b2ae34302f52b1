use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rlda_core::data_io::{gen_multiclass_gaussians, load_csv};
use rlda_core::evaluation::{
    cross_validate, derive_seed, CvResult, NoiseSpec, ProjectionMethod, RatioTraceMethod,
    RobustMethod, TraceRatioMethod,
};
use rlda_core::lda::{default_dim_ratio_trace, default_dim_trace_ratio};
use rlda_core::rlda::RldaConfig;
use rlda_core::{LabeledDataset, SmoothingConfig, StoppingRule};

use super::fit::{label_column, MethodName};
use super::fmt_f64;
use crate::error::CliError;
use crate::manifest::{ensure_out_dir, hash_file, RunManifest};
use crate::svg::{line_chart, method_color, Series};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DataSource {
    Input {
        path: PathBuf,
        label_column: Option<usize>,
    },
    Generated {
        classes: usize,
        per_class: usize,
        dim: usize,
        separation: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub source: DataSource,
    pub methods: Vec<MethodName>,
    /// Resolved noise fractions.
    pub noise: Vec<f64>,
    pub folds: usize,
    pub trials: usize,
    pub seed: u64,
    pub dim: Option<usize>,
    pub epsilon: f64,
    pub tol: f64,
}

fn build_method(
    name: MethodName,
    config: &SweepConfig,
    data: &LabeledDataset,
) -> Result<Box<dyn ProjectionMethod + Sync>, CliError> {
    let (c, d) = (data.class_count(), data.dim());
    let method: Box<dyn ProjectionMethod + Sync> = match name {
        MethodName::Lda => Box::new(RatioTraceMethod {
            dim: config.dim.unwrap_or_else(|| default_dim_ratio_trace(c, d)),
        }),
        MethodName::Trlda => Box::new(TraceRatioMethod {
            dim: config.dim.unwrap_or_else(|| default_dim_trace_ratio(c, d)),
            rule: StoppingRule::new(config.tol, 100)?,
        }),
        MethodName::Rlda => {
            let mut rlda = RldaConfig::new(config.dim.unwrap_or_else(|| default_dim_trace_ratio(c, d)));
            rlda.smoothing = SmoothingConfig::new(config.epsilon)?;
            rlda.tol = config.tol;
            rlda.seed = config.seed;
            Box::new(RobustMethod { config: rlda })
        }
    };
    Ok(method)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var("RLDA_THREADS") {
        let threads: usize = value
            .parse()
            .map_err(|_| CliError::Usage(format!("RLDA_THREADS must be a number, got {value:?}")))?;
        if threads > 0 {
            builder = builder.num_threads(threads);
        }
    }
    builder
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))
}

/// Runs the (method × noise × trial) grid of cross-validations, writes
/// results.csv (one row per fold plus aggregates), a printed summary table,
/// and an accuracy-versus-noise chart.
pub fn run(config: &SweepConfig, out: &Path) -> Result<(), CliError> {
    let mut inputs = BTreeMap::new();
    let data = match &config.source {
        DataSource::Input {
            path,
            label_column: label,
        } => {
            inputs.insert(path.display().to_string(), hash_file(path)?);
            load_csv(path, &label_column(*label))?
        }
        DataSource::Generated {
            classes,
            per_class,
            dim,
            separation,
        } => gen_multiclass_gaussians(*classes, *per_class, *dim, *separation, config.seed)?,
    };
    if data.dim() < 1 {
        return Err(CliError::Data("empty dataset".into()));
    }

    let methods: Vec<(MethodName, Box<dyn ProjectionMethod + Sync>)> = config
        .methods
        .iter()
        .map(|&name| Ok((name, build_method(name, config, &data)?)))
        .collect::<Result<_, CliError>>()?;

    // task grid; noise and split seeds depend on (level, trial) but never on
    // the method, so every method sees identical folds and corruption
    struct Task {
        method_index: usize,
        noise_level: f64,
        noise_index: usize,
        trial: usize,
    }
    let mut tasks = Vec::new();
    for method_index in 0..methods.len() {
        for (noise_index, &noise_level) in config.noise.iter().enumerate() {
            for trial in 0..config.trials {
                tasks.push(Task {
                    method_index,
                    noise_level,
                    noise_index,
                    trial,
                });
            }
        }
    }

    let data_ref = &data;
    let methods_ref = &methods;
    let results: Vec<CvResult> = thread_pool()?.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let noise = NoiseSpec {
                    fraction: task.noise_level,
                    seed: derive_seed(
                        derive_seed(config.seed, 0x4015E),
                        (task.trial * config.noise.len() + task.noise_index) as u64,
                    ),
                };
                let split_seed = derive_seed(config.seed, task.trial as u64);
                cross_validate(
                    data_ref,
                    methods_ref[task.method_index].1.as_ref(),
                    config.folds,
                    &noise,
                    split_seed,
                )
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    // results.csv: per-fold rows then one aggregate row per (method, noise)
    let mut csv = String::from("method,noise,trial,fold,accuracy\n");
    for (task, result) in tasks.iter().zip(&results) {
        for (fold, accuracy) in result.fold_accuracies.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                result.method,
                fmt_f64(task.noise_level),
                task.trial,
                fold,
                fmt_f64(*accuracy)
            ));
        }
    }
    let mut aggregate = vec![vec![0.0f64; config.noise.len()]; methods.len()];
    for (task, result) in tasks.iter().zip(&results) {
        aggregate[task.method_index][task.noise_index] +=
            result.mean_accuracy() / config.trials as f64;
    }
    for (mi, (name, _)) in methods.iter().enumerate() {
        for (ni, &noise_level) in config.noise.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},all,mean,{}\n",
                name.as_str(),
                fmt_f64(noise_level),
                fmt_f64(aggregate[mi][ni])
            ));
        }
    }

    // summary table, printed and saved
    let mut summary = String::new();
    summary.push_str(&format!("{:<8}", "noise"));
    for (name, _) in &methods {
        summary.push_str(&format!("{:>10}", name.as_str()));
    }
    summary.push('\n');
    for (ni, &noise_level) in config.noise.iter().enumerate() {
        summary.push_str(&format!("{:<8}", format!("{noise_level}")));
        for (mi, _) in methods.iter().enumerate() {
            summary.push_str(&format!("{:>10.4}", aggregate[mi][ni]));
        }
        summary.push('\n');
    }
    print!("{summary}");

    let series: Vec<Series> = methods
        .iter()
        .enumerate()
        .map(|(mi, (name, _))| Series {
            label: name.as_str().to_string(),
            points: config
                .noise
                .iter()
                .enumerate()
                .map(|(ni, &x)| (x, aggregate[mi][ni]))
                .collect(),
            color: method_color(mi),
        })
        .collect();

    ensure_out_dir(out)?;
    std::fs::write(out.join("results.csv"), csv)?;
    std::fs::write(out.join("summary.txt"), summary)?;
    std::fs::write(
        out.join("sweep.svg"),
        line_chart(&series, "training label noise fraction", "mean accuracy"),
    )?;
    RunManifest::new("sweep", config, inputs)?.write(out)?;
    Ok(())
}
