use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use rlda_core::data_io::{load_csv, LabelColumn};
use rlda_core::lda::{compute_scatter, default_dim_ratio_trace, default_dim_trace_ratio};
use rlda_core::linalg::center_columns;
use rlda_core::ratio_solver::SolverTrace;
use rlda_core::rlda::{fit_rlda_from, InitPolicy, RldaConfig, RldaModel};
use rlda_core::{ratio_trace_lda, trace_ratio_lda, LabeledDataset, SmoothingConfig, StoppingRule};

use super::fmt_f64;
use crate::error::CliError;
use crate::manifest::{ensure_out_dir, hash_file, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Lda,
    Trlda,
    Rlda,
}

impl MethodName {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodName::Lda => "lda",
            MethodName::Trlda => "trlda",
            MethodName::Rlda => "rlda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InitName {
    Random,
    Pca,
    Warmstart,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitConfig {
    pub input: PathBuf,
    pub label_column: Option<usize>,
    pub method: MethodName,
    pub dim: Option<usize>,
    pub epsilon: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub init: InitName,
    pub warm_model: Option<PathBuf>,
}

pub fn label_column(index: Option<usize>) -> LabelColumn {
    match index {
        Some(i) => LabelColumn::Index(i),
        None => LabelColumn::Last,
    }
}

/// Arithmetic class means in the centered frame, for persisting baseline fits
/// in the common model format.
fn centered_class_means(
    data: &LabeledDataset,
) -> Result<(Vec<nalgebra::DVector<f64>>, nalgebra::DVector<f64>), CliError> {
    let (centered, global_mean) = center_columns(data.x());
    let centered = LabeledDataset::new(centered, data.labels().to_vec())?;
    let scatter = compute_scatter(&centered);
    Ok((scatter.class_means, global_mean))
}

fn trace_csv(trace: &SolverTrace) -> String {
    let mut text = String::from("iteration,lambda,numerator,denominator\n");
    for record in &trace.records {
        text.push_str(&format!(
            "{},{},{},{}\n",
            record.iteration,
            fmt_f64(record.lambda),
            fmt_f64(record.f_value),
            fmt_f64(record.g_value)
        ));
    }
    text
}

/// Fits the requested method and writes model.json, trace.csv and the manifest.
pub fn run(config: &FitConfig, out: &Path) -> Result<(), CliError> {
    let data = load_csv(&config.input, &label_column(config.label_column))?;
    let dim = config.dim.unwrap_or_else(|| match config.method {
        MethodName::Lda => default_dim_ratio_trace(data.class_count(), data.dim()),
        _ => default_dim_trace_ratio(data.class_count(), data.dim()),
    });
    if dim < 1 || dim > data.dim() {
        return Err(CliError::Usage(format!(
            "--dim must lie in 1..={}, got {dim}",
            data.dim()
        )));
    }

    // materialize the resolved dimension so a rerun does not re-derive it
    let mut resolved = config.clone();
    resolved.dim = Some(dim);

    let mut inputs = BTreeMap::new();
    inputs.insert(
        config.input.display().to_string(),
        hash_file(&config.input)?,
    );

    let rule = StoppingRule::new(config.tol, config.max_iter)?;
    let (model, trace) = match config.method {
        MethodName::Lda => {
            let w = ratio_trace_lda(&data, dim)?;
            let scatter = compute_scatter(&data);
            let numerator = (w.matrix().transpose() * &scatter.s_w * w.matrix()).trace();
            let denominator = (w.matrix().transpose() * &scatter.s_t * w.matrix()).trace();
            let objective = if denominator > 0.0 {
                numerator / denominator
            } else {
                0.0
            };
            let (class_means, global_mean) = centered_class_means(&data)?;
            let trace = SolverTrace::default();
            let model =
                RldaModel::from_parts(w, class_means, global_mean, trace.clone(), objective, 0.0)?;
            (model, trace)
        }
        MethodName::Trlda => {
            let (w, trace) = trace_ratio_lda(&data, dim, &rule)?;
            let objective = trace.final_lambda().unwrap_or(f64::NAN);
            let (class_means, global_mean) = centered_class_means(&data)?;
            let model = RldaModel::from_parts(
                w,
                class_means,
                global_mean,
                trace.clone(),
                objective,
                0.0,
            )?;
            (model, trace)
        }
        MethodName::Rlda => {
            let mut rlda_config = RldaConfig::new(dim);
            rlda_config.smoothing = SmoothingConfig::new(config.epsilon)?;
            rlda_config.tol = config.tol;
            rlda_config.max_iter = config.max_iter;
            rlda_config.seed = config.seed;
            rlda_config.init = match config.init {
                InitName::Random => InitPolicy::RandomOrthonormal,
                InitName::Pca => InitPolicy::PcaTopM,
                InitName::Warmstart => InitPolicy::TraceRatioWarmStart,
            };
            let start = match &config.warm_model {
                Some(path) => {
                    inputs.insert(path.display().to_string(), hash_file(path)?);
                    let warm = RldaModel::load(path)?;
                    Some(warm.projection().clone())
                }
                None => None,
            };
            let model = fit_rlda_from(&data, &rlda_config, start)?;
            let trace = model.trace().clone();
            (model, trace)
        }
    };

    ensure_out_dir(out)?;
    model.save(&out.join("model.json"))?;
    std::fs::write(out.join("trace.csv"), trace_csv(&trace))?;
    RunManifest::new("fit", &resolved, inputs)?.write(out)?;
    println!(
        "fit {}: dim {} -> {} (objective {}, {} iterations)",
        config.method.as_str(),
        dim,
        out.display(),
        fmt_f64(model.final_objective()),
        trace.iterations()
    );
    Ok(())
}
