//! Dataset ingestion (CSV) and seeded synthetic generators for the
//! robustness experiments.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lda::{ratio_trace_lda, LabeledDataset};
use crate::linalg::{orthonormalize, sym_eig, DataMatrix};

/// Where the class label lives in a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Last column of each row (the default, and what [`save_csv`] writes).
    Last,
    /// Zero-based column index.
    Index(usize),
    /// One label per line in a separate text file.
    SeparateFile(PathBuf),
}

fn parse_feature(cell: &str, row: usize, col: usize) -> Result<f64> {
    let value: f64 = cell
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("row {row}, column {col}: not a number: {cell:?}")))?;
    if !value.is_finite() {
        return Err(Error::Parse(format!(
            "row {row}, column {col}: non-finite value {cell:?}"
        )));
    }
    Ok(value)
}

/// Maps raw label strings to `{1..c}`. Labels that already form exactly
/// `{1..c}` as integers are kept; anything else is remapped by first
/// appearance.
fn encode_labels(raw: &[String]) -> Vec<usize> {
    let as_ints: Option<Vec<usize>> = raw.iter().map(|s| s.trim().parse::<usize>().ok()).collect();
    if let Some(ints) = as_ints {
        let max = ints.iter().copied().max().unwrap_or(0);
        if max >= 1 && !ints.contains(&0) {
            let mut present = vec![false; max + 1];
            for &v in &ints {
                present[v] = true;
            }
            if present[1..].iter().all(|&p| p) {
                return ints;
            }
        }
    }
    let mut order: Vec<&str> = Vec::new();
    raw.iter()
        .map(|s| {
            let key = s.trim();
            match order.iter().position(|&k| k == key) {
                Some(i) => i + 1,
                None => {
                    order.push(key);
                    order.len()
                }
            }
        })
        .collect()
}

/// Loads a rectangular numeric CSV into a dataset, one row per sample.
///
/// A header row is auto-detected: if any feature cell of the first row fails
/// to parse as a number, the row is skipped. String labels are mapped to
/// `{1..c}` in first-appearance order.
pub fn load_csv(path: &Path, label_column: &LabelColumn) -> Result<LabeledDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(false)
        .from_path(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(Error::Parse(format!("{}: file is empty", path.display())));
    }
    let width = rows[0].len();

    let label_index = match label_column {
        LabelColumn::Last => {
            if width < 2 {
                return Err(Error::InvalidInput(
                    "need at least one feature column plus the label column".into(),
                ));
            }
            Some(width - 1)
        }
        LabelColumn::Index(i) => {
            if *i >= width {
                return Err(Error::InvalidInput(format!(
                    "label column {i} out of range for {width} columns"
                )));
            }
            Some(*i)
        }
        LabelColumn::SeparateFile(_) => None,
    };

    let feature_cols: Vec<usize> = (0..width).filter(|c| Some(*c) != label_index).collect();
    let has_header = rows[0]
        .iter()
        .enumerate()
        .any(|(c, cell)| feature_cols.contains(&c) && cell.trim().parse::<f64>().is_err());
    let data_rows = if has_header { &rows[1..] } else { &rows[..] };
    if data_rows.is_empty() {
        return Err(Error::Parse(format!(
            "{}: no data rows after the header",
            path.display()
        )));
    }

    let n = data_rows.len();
    let d = feature_cols.len();
    let mut values = DMatrix::zeros(d, n);
    for (j, row) in data_rows.iter().enumerate() {
        for (i, &c) in feature_cols.iter().enumerate() {
            values[(i, j)] = parse_feature(&row[c], j, c)?;
        }
    }

    let raw_labels: Vec<String> = match label_column {
        LabelColumn::SeparateFile(label_path) => {
            let text = std::fs::read_to_string(label_path)?;
            let lines: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(str::to_string)
                .collect();
            if lines.len() != n {
                return Err(Error::Parse(format!(
                    "{}: {} labels for {n} samples",
                    label_path.display(),
                    lines.len()
                )));
            }
            lines
        }
        _ => data_rows
            .iter()
            .map(|row| row[label_index.unwrap()].clone())
            .collect(),
    };
    LabeledDataset::new(DataMatrix::new(values)?, encode_labels(&raw_labels))
}

/// Writes one sample per row, features in full round-trip precision, label as
/// the last column; no header. `load_csv(save_csv(ds))` reproduces `ds`
/// bit-for-bit.
pub fn save_csv(data: &LabeledDataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    let values = data.x().values();
    for j in 0..data.samples() {
        for i in 0..data.dim() {
            out.push_str(&format!("{},", values[(i, j)]));
        }
        out.push_str(&format!("{}\n", data.labels()[j]));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Recipe for Gaussian classes plus box-placed outliers.
#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub class_counts: Vec<usize>,
    pub class_means: Vec<DVector<f64>>,
    pub class_covs: Vec<DMatrix<f64>>,
    pub outliers_per_class: usize,
    /// Axis-aligned bounds, one `(low, high)` pair per dimension.
    pub outlier_box: Vec<(f64, f64)>,
    pub seed: u64,
}

impl SyntheticSpec {
    /// The two-cluster toy: 100 points per class around (−4, 0) and (4, 0)
    /// with unit isotropic covariance, and 3 outliers per class drawn from a
    /// box far outside both clusters (beyond six standard deviations).
    pub fn two_cluster_toy(seed: u64) -> Self {
        Self {
            class_counts: vec![100, 100],
            class_means: vec![
                DVector::from_vec(vec![-4.0, 0.0]),
                DVector::from_vec(vec![4.0, 0.0]),
            ],
            class_covs: vec![DMatrix::identity(2, 2), DMatrix::identity(2, 2)],
            outliers_per_class: 3,
            outlier_box: vec![(8.0, 12.0), (30.0, 40.0)],
            seed,
        }
    }

    pub fn with_outliers(mut self, count: usize) -> Self {
        self.outliers_per_class = count;
        self
    }

    fn validate(&self) -> Result<()> {
        let c = self.class_counts.len();
        if c < 1 || self.class_means.len() != c || self.class_covs.len() != c {
            return Err(Error::InvalidInput(
                "class counts, means and covariances must have equal length".into(),
            ));
        }
        if self.class_counts.contains(&0) {
            return Err(Error::InvalidInput("empty class in synthetic spec".into()));
        }
        let d = self.class_means[0].len();
        if self.class_means.iter().any(|m| m.len() != d) {
            return Err(Error::InvalidInput("class means differ in dimension".into()));
        }
        if self.outlier_box.len() != d {
            return Err(Error::InvalidInput(format!(
                "outlier box has {} bounds for dimension {d}",
                self.outlier_box.len()
            )));
        }
        if self.outlier_box.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::InvalidInput("outlier box bounds are inverted".into()));
        }
        for cov in &self.class_covs {
            if cov.nrows() != d || cov.ncols() != d {
                return Err(Error::InvalidInput("covariance shape mismatch".into()));
            }
            let (vals, _) = sym_eig(cov)?;
            if vals.min() < -1e-10 * (1.0 + cov.amax()) {
                return Err(Error::InvalidInput(
                    "covariance is not positive semidefinite".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.class_means[0].len()
    }
}

/// A generated toy dataset with its outlier ground truth and the projection
/// direction fitted on the outlier-free subset (the robustness reference).
#[derive(Debug, Clone)]
pub struct ToyData {
    pub data: LabeledDataset,
    pub outlier_indices: Vec<usize>,
    pub reference_direction: DVector<f64>,
}

fn covariance_sqrt(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = sym_eig(cov)?;
    let sqrt = DVector::from_iterator(vals.len(), vals.iter().map(|v| v.max(0.0).sqrt()));
    Ok(&vecs * DMatrix::from_diagonal(&sqrt) * vecs.transpose())
}

/// Samples Gaussian classes, appends box-placed outliers labeled with their
/// class, and computes the outlier-free one-dimensional projection as a
/// reference. Identical seeds give identical output.
pub fn gen_two_gaussians_with_outliers(spec: &SyntheticSpec) -> Result<ToyData> {
    spec.validate()?;
    let d = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cols = Vec::new();
    let mut labels = Vec::new();
    let mut inlier_indices = Vec::new();
    let mut outlier_indices = Vec::new();
    for (class, &count) in spec.class_counts.iter().enumerate() {
        let sqrt_cov = covariance_sqrt(&spec.class_covs[class])?;
        for _ in 0..count {
            let z = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
            inlier_indices.push(cols.len());
            cols.push(&spec.class_means[class] + &sqrt_cov * z);
            labels.push(class + 1);
        }
        for _ in 0..spec.outliers_per_class {
            let point = DVector::from_fn(d, |i, _| {
                let (lo, hi) = spec.outlier_box[i];
                if lo == hi {
                    lo
                } else {
                    rng.random_range(lo..hi)
                }
            });
            outlier_indices.push(cols.len());
            cols.push(point);
            labels.push(class + 1);
        }
    }
    let data = LabeledDataset::new(DataMatrix::from_columns(&cols)?, labels)?;
    let inliers = data.subset(&inlier_indices)?;
    let reference = ratio_trace_lda(&inliers, 1)?;
    Ok(ToyData {
        data,
        outlier_indices,
        reference_direction: reference.column(0),
    })
}

/// Multi-class Gaussian blobs with unit isotropic covariance. Class means sit
/// on a randomly oriented regular simplex with pairwise distance `separation`
/// (falling back to random unit directions when `c − 1 > d`).
pub fn gen_multiclass_gaussians(
    classes: usize,
    per_class: usize,
    dim: usize,
    separation: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if classes < 2 || dim < 2 {
        return Err(Error::InvalidInput(format!(
            "need classes >= 2 and dim >= 2, got c={classes}, d={dim}"
        )));
    }
    if per_class == 0 {
        return Err(Error::InvalidInput("per_class must be >= 1".into()));
    }
    if separation.is_nan() || separation < 0.0 || !separation.is_finite() {
        return Err(Error::InvalidInput(format!(
            "separation must be finite and >= 0, got {separation}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let means: Vec<DVector<f64>> = if classes <= dim {
        // centered simplex vertices mapped through a random orthonormal frame:
        // pairwise vertex distance is √2, rescaled to `separation`
        let frame = loop {
            let g = DMatrix::from_fn(dim, classes, |_, _| rng.sample::<f64, _>(StandardNormal));
            if let Ok(q) = orthonormalize(&g) {
                break q;
            }
        };
        (0..classes)
            .map(|i| {
                let mut vertex = DVector::from_element(classes, -1.0 / classes as f64);
                vertex[i] += 1.0;
                (frame.matrix() * vertex).scale(separation / std::f64::consts::SQRT_2)
            })
            .collect()
    } else {
        (0..classes)
            .map(|_| {
                let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                let norm = v.norm();
                v.scale(separation / (std::f64::consts::SQRT_2 * norm))
            })
            .collect()
    };

    let mut cols = Vec::with_capacity(classes * per_class);
    let mut labels = Vec::with_capacity(classes * per_class);
    for (class, mean) in means.iter().enumerate() {
        for _ in 0..per_class {
            cols.push(DVector::from_fn(dim, |i, _| {
                mean[i] + rng.sample::<f64, _>(StandardNormal)
            }));
            labels.push(class + 1);
        }
    }
    LabeledDataset::new(DataMatrix::from_columns(&cols)?, labels)
}
