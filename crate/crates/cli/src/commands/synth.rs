use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use rlda_core::data_io::{gen_multiclass_gaussians, gen_two_gaussians_with_outliers, save_csv, SyntheticSpec};
use rlda_core::ratio_trace_lda;

use super::fmt_f64;
use crate::error::CliError;
use crate::manifest::{ensure_out_dir, RunManifest};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SynthMode {
    /// Two Gaussian clusters plus far-off outliers per class.
    TwoClusterToy { outliers: usize },
    /// Isotropic Gaussian blobs on a seeded simplex.
    Blobs {
        classes: usize,
        per_class: usize,
        dim: usize,
        separation: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub mode: SynthMode,
    pub seed: u64,
}

/// Writes dataset.csv, outliers.txt, reference_direction.txt and the manifest.
pub fn run(config: &SynthConfig, out: &Path) -> Result<(), CliError> {
    ensure_out_dir(out)?;
    let (data, outlier_indices, reference) = match &config.mode {
        SynthMode::TwoClusterToy { outliers } => {
            let spec = SyntheticSpec::two_cluster_toy(config.seed).with_outliers(*outliers);
            let toy = gen_two_gaussians_with_outliers(&spec)?;
            (toy.data, toy.outlier_indices, toy.reference_direction)
        }
        SynthMode::Blobs {
            classes,
            per_class,
            dim,
            separation,
        } => {
            let data =
                gen_multiclass_gaussians(*classes, *per_class, *dim, *separation, config.seed)?;
            let reference = ratio_trace_lda(&data, 1)?.column(0);
            (data, Vec::new(), reference)
        }
    };

    save_csv(&data, &out.join("dataset.csv"))?;

    let mut outliers_text = String::new();
    for idx in &outlier_indices {
        outliers_text.push_str(&format!("{idx}\n"));
    }
    std::fs::write(out.join("outliers.txt"), outliers_text)?;

    let mut reference_text = String::new();
    for value in reference.iter() {
        reference_text.push_str(&fmt_f64(*value));
        reference_text.push('\n');
    }
    std::fs::write(out.join("reference_direction.txt"), reference_text)?;

    RunManifest::new("synth", config, BTreeMap::new())?.write(out)?;
    println!(
        "synth: {} samples, {} features, {} classes, {} outliers -> {}",
        data.samples(),
        data.dim(),
        data.class_count(),
        outlier_indices.len(),
        out.display()
    );
    Ok(())
}
