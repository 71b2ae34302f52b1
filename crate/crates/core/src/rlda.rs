//! Robust LDA: minimization of the ratio of column-wise ℓ₂-norm sums
//! (projection distances over captured data energy) with per-class means
//! optimized under the same robust norm.
//!
//! The solver alternates a ratio update with one closed-form reweighting step:
//! diagonal weights from the current residuals, a `d×d` matrix assembly that
//! folds in the optimal means, a weighted-mean update, and an eigenvector
//! step. All norms are smoothed as `√(‖·‖² + ε)` so the weights stay finite;
//! the smoothed objective decreases monotonically.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lda::{trace_ratio_lda, LabeledDataset};
use crate::linalg::{
    center_columns, largest_m_eigvecs, random_orthonormal, smallest_m_eigvecs, DataMatrix,
    Projection,
};
use crate::norms::{inverse_halved_norms, l12_norm, smoothed_l12_norm, SmoothingConfig};
use crate::ratio_solver::{solve_ratio, IterationRecord, RatioProblem, SolverTrace, StoppingRule};

/// How the initial orthonormal basis is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitPolicy {
    /// QR of a seeded Gaussian draw (seed comes from the config).
    RandomOrthonormal,
    /// Leading eigenvectors of the total scatter of the centered data.
    PcaTopM,
    /// Run trace-ratio LDA first; fall back to a seeded random basis if that
    /// fails. The objective is non-convex, so a sensible warm start matters.
    TraceRatioWarmStart,
}

/// Configuration for [`fit_rlda`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RldaConfig {
    /// Reduced dimension (1 ≤ m ≤ d).
    pub m: usize,
    pub smoothing: SmoothingConfig,
    /// Stop when the objective difference between iterations drops below this.
    pub tol: f64,
    pub max_iter: usize,
    pub init: InitPolicy,
    /// Seed for random initialization (and the warm-start fallback).
    pub seed: u64,
    /// Reweighting steps per ratio update. The written algorithm performs one;
    /// more steps push the subproblem closer to stationarity.
    pub inner_iterations: usize,
    /// When false the class means stay at their arithmetic values and only the
    /// projection is optimized.
    pub optimize_means: bool,
}

impl RldaConfig {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            smoothing: SmoothingConfig::default(),
            tol: 1e-6,
            max_iter: 100,
            init: InitPolicy::TraceRatioWarmStart,
            seed: 0,
            inner_iterations: 1,
            optimize_means: true,
        }
    }

    fn validate(&self, d: usize) -> Result<()> {
        if self.m < 1 || self.m > d {
            return Err(Error::InvalidInput(format!(
                "reduced dimension must satisfy 1 <= m <= d, got m={}, d={d}",
                self.m
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidInput("tolerance must be > 0".into()));
        }
        if self.max_iter < 1 || self.inner_iterations < 1 {
            return Err(Error::InvalidInput(
                "max_iter and inner_iterations must be >= 1".into(),
            ));
        }
        Ok(())
    }

    fn stopping_rule(&self) -> Result<StoppingRule> {
        StoppingRule::new(self.tol, self.max_iter)
    }
}

/// Objective value of the robust ratio at one `(W, means)` point.
#[derive(Debug, Clone, Copy)]
pub struct RldaObjective {
    /// `numerator / denominator`, forced to 0 when the numerator sits at its
    /// smoothing floor (all class deviations vanish).
    pub lambda: f64,
    /// `Σ_i ‖Wᵀ(X_i − μ_i 1ᵀ)‖₁,₂`, smoothed.
    pub numerator: f64,
    /// `‖X‖₁,₂ − ‖X − WWᵀX‖₁,₂`, smoothed.
    pub denominator: f64,
}

fn class_deviation_block(
    data: &LabeledDataset,
    class: usize,
    mean: &DVector<f64>,
) -> DMatrix<f64> {
    let mut block = data.class_matrix(class);
    for mut col in block.column_iter_mut() {
        col -= mean;
    }
    block
}

fn reconstruction_residual(x: &DMatrix<f64>, w: &Projection) -> DMatrix<f64> {
    let coords = w.matrix().transpose() * x;
    x - w.matrix() * coords
}

fn smoothed_numerator(
    data: &LabeledDataset,
    w: &Projection,
    means: &[DVector<f64>],
    eps: &SmoothingConfig,
) -> f64 {
    (1..=data.class_count())
        .map(|class| {
            let dev = class_deviation_block(data, class, &means[class - 1]);
            smoothed_l12_norm(&(w.matrix().transpose() * dev), eps)
        })
        .sum()
}

/// Evaluates the robust objective on centered data.
///
/// All three ℓ₂ norms are smoothed consistently, so the numerator can never
/// drop below `n·√ε`; when it reaches that floor the objective is reported as
/// exactly 0 (the global minimum). A denominator at or below `1e-12·‖X‖₁,₂`
/// with a non-floor numerator means `W` captures no data energy and is
/// rejected as [`Error::DegenerateProjection`].
///
/// Passing a zero-ε [`SmoothingConfig`] evaluates the unsmoothed objective,
/// which is informational only: the solver iterates and the monotonicity
/// guarantee holds on the smoothed surrogate.
pub fn rlda_objective(
    data: &LabeledDataset,
    w: &Projection,
    means: &[DVector<f64>],
    eps: &SmoothingConfig,
) -> Result<RldaObjective> {
    if w.dim() != data.dim() || means.len() != data.class_count() {
        return Err(Error::InvalidInput(
            "projection or means do not match the dataset shape".into(),
        ));
    }
    let x = data.x().values();
    let numerator = smoothed_numerator(data, w, means, eps);
    let denominator =
        smoothed_l12_norm(x, eps) - smoothed_l12_norm(&reconstruction_residual(x, w), eps);
    if denominator <= 1e-12 * l12_norm(x) {
        return Err(Error::DegenerateProjection(format!(
            "denominator {denominator:.3e} captures no data energy"
        )));
    }
    let floor = data.samples() as f64 * eps.epsilon().sqrt();
    let lambda = if numerator <= floor * (1.0 + 1e-9) {
        0.0
    } else {
        numerator / denominator
    };
    Ok(RldaObjective {
        lambda,
        numerator,
        denominator,
    })
}

/// Per-class reweighting vectors with entries `1/(2√(‖Wᵀ(x_j^i − μ_i)‖² + ε))`.
pub fn class_weights(
    data: &LabeledDataset,
    w: &Projection,
    means: &[DVector<f64>],
    eps: &SmoothingConfig,
) -> Result<Vec<DVector<f64>>> {
    (1..=data.class_count())
        .map(|class| {
            let dev = class_deviation_block(data, class, &means[class - 1]);
            inverse_halved_norms(&(w.matrix().transpose() * dev), eps)
        })
        .collect()
}

/// Reweighting vector over all samples with entries
/// `1/(2√(‖x_i − WWᵀx_i‖² + ε))`.
pub fn reconstruction_weights(
    data: &LabeledDataset,
    w: &Projection,
    eps: &SmoothingConfig,
) -> Result<DVector<f64>> {
    inverse_halved_norms(&reconstruction_residual(data.x().values(), w), eps)
}

/// `Σ_j w_j x_j x_jᵀ` computed by scaling columns, never materializing an
/// `n×n` diagonal. Takes the block by value and scales it in place.
fn weighted_outer_sum(mut block: DMatrix<f64>, weights: &DVector<f64>) -> DMatrix<f64> {
    for (j, mut col) in block.column_iter_mut().enumerate() {
        col *= weights[j].sqrt();
    }
    &block * block.transpose()
}

/// The subproblem matrix
/// `A = Σ_i X_i (D_i − D_i 1 1ᵀ D_i / (1ᵀD_i1)) X_iᵀ − λ X D Xᵀ`,
/// assembled in `O(d²n)` and symmetrized on output. Each class term is the
/// weighted scatter about the weighted class mean, hence positive
/// semidefinite.
pub fn assemble_a(
    data: &LabeledDataset,
    class_weights: &[DVector<f64>],
    recon_weights: &DVector<f64>,
    lambda: f64,
) -> DMatrix<f64> {
    assert_eq!(class_weights.len(), data.class_count(), "weight list length");
    assert_eq!(recon_weights.len(), data.samples(), "recon weight length");
    let d = data.dim();
    let mut a = DMatrix::zeros(d, d);
    for class in 1..=data.class_count() {
        let block = data.class_matrix(class);
        let weights = &class_weights[class - 1];
        assert_eq!(weights.len(), block.ncols(), "class weight length");
        let weight_sum: f64 = weights.sum();
        let weighted_mean_times_sum = &block * weights;
        a += weighted_outer_sum(block, weights)
            - (&weighted_mean_times_sum * weighted_mean_times_sum.transpose()) / weight_sum;
    }
    a -= weighted_outer_sum(data.x().values().clone(), recon_weights).scale(lambda);
    (&a + a.transpose()).scale(0.5)
}

/// Fixed-means variant of [`assemble_a`]: the class terms are weighted
/// scatters about the supplied means instead of the optimal weighted means.
fn assemble_a_fixed_means(
    data: &LabeledDataset,
    means: &[DVector<f64>],
    class_weights: &[DVector<f64>],
    recon_weights: &DVector<f64>,
    lambda: f64,
) -> DMatrix<f64> {
    let d = data.dim();
    let mut a = DMatrix::zeros(d, d);
    for class in 1..=data.class_count() {
        let dev = class_deviation_block(data, class, &means[class - 1]);
        a += weighted_outer_sum(dev, &class_weights[class - 1]);
    }
    a -= weighted_outer_sum(data.x().values().clone(), recon_weights).scale(lambda);
    (&a + a.transpose()).scale(0.5)
}

/// The weighted class means `μ_i = X_i D_i 1 / (1ᵀ D_i 1)`, the stationary
/// means of the reweighted subproblem. Each lies in the convex hull of its
/// class samples.
pub fn update_means(data: &LabeledDataset, class_weights: &[DVector<f64>]) -> Vec<DVector<f64>> {
    (1..=data.class_count())
        .map(|class| {
            let block = data.class_matrix(class);
            let weights = &class_weights[class - 1];
            (&block * weights) / weights.sum()
        })
        .collect()
}

fn arithmetic_class_means(data: &LabeledDataset) -> Vec<DVector<f64>> {
    (1..=data.class_count())
        .map(|class| {
            let block = data.class_matrix(class);
            let mut mean = DVector::zeros(data.dim());
            for col in block.column_iter() {
                mean += col;
            }
            mean / block.ncols() as f64
        })
        .collect()
}

#[derive(Debug, Clone)]
struct RldaState {
    w: Projection,
    means: Vec<DVector<f64>>,
}

struct RldaProblem<'a> {
    data: &'a LabeledDataset,
    total_smoothed: f64,
    cfg: &'a RldaConfig,
}

impl RatioProblem for RldaProblem<'_> {
    type State = RldaState;

    fn numerator(&self, state: &RldaState) -> f64 {
        smoothed_numerator(self.data, &state.w, &state.means, &self.cfg.smoothing)
    }

    fn denominator(&self, state: &RldaState) -> f64 {
        let residual = reconstruction_residual(self.data.x().values(), &state.w);
        self.total_smoothed - smoothed_l12_norm(&residual, &self.cfg.smoothing)
    }

    fn subsolve(&mut self, lambda: f64, state: &RldaState) -> Result<RldaState> {
        let mut current = state.clone();
        for _ in 0..self.cfg.inner_iterations {
            let d_classes = class_weights(self.data, &current.w, &current.means, &self.cfg.smoothing)?;
            let d_recon = reconstruction_weights(self.data, &current.w, &self.cfg.smoothing)?;
            let (a, means) = if self.cfg.optimize_means {
                (
                    assemble_a(self.data, &d_classes, &d_recon, lambda),
                    update_means(self.data, &d_classes),
                )
            } else {
                (
                    assemble_a_fixed_means(
                        self.data,
                        &current.means,
                        &d_classes,
                        &d_recon,
                        lambda,
                    ),
                    current.means.clone(),
                )
            };
            current = RldaState {
                w: smallest_m_eigvecs(&a, self.cfg.m)?,
                means,
            };
        }
        Ok(current)
    }
}

/// A fitted robust-LDA model.
///
/// Class means are stored in the centered coordinate frame the solver works
/// in; `global_mean` is what was subtracted from the raw data.
#[derive(Debug, Clone)]
pub struct RldaModel {
    w: Projection,
    class_means: Vec<DVector<f64>>,
    global_mean: DVector<f64>,
    trace: SolverTrace,
    final_objective: f64,
    epsilon: f64,
    iterations: usize,
}

impl RldaModel {
    /// Assembles a model from an already-fitted projection (used to persist
    /// the baseline methods in the same format).
    pub fn from_parts(
        w: Projection,
        class_means: Vec<DVector<f64>>,
        global_mean: DVector<f64>,
        trace: SolverTrace,
        final_objective: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if global_mean.len() != w.dim() || class_means.iter().any(|m| m.len() != w.dim()) {
            return Err(Error::InvalidInput(
                "mean dimensions do not match the projection".into(),
            ));
        }
        let iterations = trace.iterations();
        Ok(Self {
            w,
            class_means,
            global_mean,
            trace,
            final_objective,
            epsilon,
            iterations,
        })
    }

    pub fn projection(&self) -> &Projection {
        &self.w
    }

    pub fn class_means(&self) -> &[DVector<f64>] {
        &self.class_means
    }

    pub fn global_mean(&self) -> &DVector<f64> {
        &self.global_mean
    }

    /// Solver history. Empty on models loaded from disk.
    pub fn trace(&self) -> &SolverTrace {
        &self.trace
    }

    pub fn final_objective(&self) -> f64 {
        self.final_objective
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Projects new samples: `Wᵀ(x − mean·1ᵀ)`.
    pub fn transform(&self, x: &DataMatrix) -> Result<DataMatrix> {
        if x.dim() != self.w.dim() {
            return Err(Error::InvalidInput(format!(
                "expected {} rows, got {}",
                self.w.dim(),
                x.dim()
            )));
        }
        let mut shifted = x.values().clone();
        for mut col in shifted.column_iter_mut() {
            col -= &self.global_mean;
        }
        DataMatrix::new(self.w.matrix().transpose() * shifted)
    }

    pub fn to_json_string(&self) -> String {
        let file = ModelFile::from(self);
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))?;
        file.into_model()
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

/// Self-describing on-disk form: dimensions, smoothing constant, the
/// projection in row-major order, the means and the final objective.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    d: usize,
    m: usize,
    c: usize,
    epsilon: f64,
    w_row_major: Vec<f64>,
    class_means: Vec<Vec<f64>>,
    global_mean: Vec<f64>,
    final_lambda: f64,
    iterations: usize,
}

impl From<&RldaModel> for ModelFile {
    fn from(model: &RldaModel) -> Self {
        let w = model.w.matrix();
        let mut w_row_major = Vec::with_capacity(w.nrows() * w.ncols());
        for i in 0..w.nrows() {
            for j in 0..w.ncols() {
                w_row_major.push(w[(i, j)]);
            }
        }
        ModelFile {
            d: w.nrows(),
            m: w.ncols(),
            c: model.class_means.len(),
            epsilon: model.epsilon,
            w_row_major,
            class_means: model
                .class_means
                .iter()
                .map(|m| m.as_slice().to_vec())
                .collect(),
            global_mean: model.global_mean.as_slice().to_vec(),
            final_lambda: model.final_objective,
            iterations: model.iterations,
        }
    }
}

impl ModelFile {
    fn into_model(self) -> Result<RldaModel> {
        if self.w_row_major.len() != self.d * self.m {
            return Err(Error::Parse(format!(
                "projection has {} entries, expected {}x{}",
                self.w_row_major.len(),
                self.d,
                self.m
            )));
        }
        if self.global_mean.len() != self.d
            || self.class_means.len() != self.c
            || self.class_means.iter().any(|m| m.len() != self.d)
        {
            return Err(Error::Parse("mean dimensions are inconsistent".into()));
        }
        let w = DMatrix::from_row_slice(self.d, self.m, &self.w_row_major);
        Ok(RldaModel {
            w: Projection::new(w)?,
            class_means: self.class_means.into_iter().map(DVector::from_vec).collect(),
            global_mean: DVector::from_vec(self.global_mean),
            trace: SolverTrace::default(),
            final_objective: self.final_lambda,
            epsilon: self.epsilon,
            iterations: self.iterations,
        })
    }
}

fn initial_projection(centered: &LabeledDataset, cfg: &RldaConfig) -> Result<Projection> {
    match cfg.init {
        InitPolicy::RandomOrthonormal => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            random_orthonormal(centered.dim(), cfg.m, &mut rng)
        }
        InitPolicy::PcaTopM => {
            let x = centered.x().values();
            let cov = (x * x.transpose()).scale(1.0 / centered.samples() as f64);
            largest_m_eigvecs(&cov, cfg.m)
        }
        InitPolicy::TraceRatioWarmStart => {
            match trace_ratio_lda(centered, cfg.m, &StoppingRule::default()) {
                Ok((w, _)) => Ok(w),
                Err(_) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    random_orthonormal(centered.dim(), cfg.m, &mut rng)
                }
            }
        }
    }
}

/// Fits the robust model: centers the data, chooses a starting basis per the
/// init policy, and runs the ratio solver with one reweighting pass per
/// objective update. See [`fit_rlda_from`] to supply an explicit start.
pub fn fit_rlda(data: &LabeledDataset, cfg: &RldaConfig) -> Result<RldaModel> {
    fit_rlda_from(data, cfg, None)
}

/// [`fit_rlda`] with an optional explicit initial basis (for warm starts from
/// a previously fitted model). The basis must be `d×m`.
pub fn fit_rlda_from(
    data: &LabeledDataset,
    cfg: &RldaConfig,
    start: Option<Projection>,
) -> Result<RldaModel> {
    cfg.validate(data.dim())?;
    let (centered_x, global_mean) = center_columns(data.x());
    let centered = LabeledDataset::new(centered_x, data.labels().to_vec())?;

    let w0 = match start {
        Some(w) => {
            if w.dim() != data.dim() || w.reduced_dim() != cfg.m {
                return Err(Error::InvalidInput(format!(
                    "warm start must be {}x{}, got {}x{}",
                    data.dim(),
                    cfg.m,
                    w.dim(),
                    w.reduced_dim()
                )));
            }
            w
        }
        None => initial_projection(&centered, cfg)?,
    };
    let means0 = arithmetic_class_means(&centered);

    let total_smoothed = smoothed_l12_norm(centered.x().values(), &cfg.smoothing);
    let numerator0 = smoothed_numerator(&centered, &w0, &means0, &cfg.smoothing);
    let floor = centered.samples() as f64 * cfg.smoothing.epsilon().sqrt();
    if numerator0 <= floor * (1.0 + 1e-9) {
        // Every sample already sits at its class mean under W: the objective
        // is at its global minimum and there is nothing to iterate.
        let residual = reconstruction_residual(centered.x().values(), &w0);
        let denominator0 = total_smoothed - smoothed_l12_norm(&residual, &cfg.smoothing);
        let trace = SolverTrace {
            records: vec![IterationRecord {
                iteration: 0,
                lambda: 0.0,
                f_value: numerator0,
                g_value: denominator0,
                subproblem_value: 0.0,
                wall_time: std::time::Duration::ZERO,
            }],
            converged: true,
            stalled: false,
        };
        return Ok(RldaModel {
            w: w0,
            class_means: means0,
            global_mean,
            final_objective: 0.0,
            epsilon: cfg.smoothing.epsilon(),
            iterations: 0,
            trace,
        });
    }

    // surfaces DegenerateProjection when w0 captures no data energy
    rlda_objective(&centered, &w0, &means0, &cfg.smoothing)?;

    let mut problem = RldaProblem {
        data: &centered,
        total_smoothed,
        cfg,
    };
    let initial = RldaState {
        w: w0,
        means: means0,
    };
    let (state, trace) = solve_ratio(&mut problem, initial, &cfg.stopping_rule()?)?;
    let final_objective = trace.final_lambda().expect("trace is never empty");
    Ok(RldaModel {
        w: state.w,
        class_means: state.means,
        global_mean,
        final_objective,
        epsilon: cfg.smoothing.epsilon(),
        iterations: trace.iterations(),
        trace,
    })
}
