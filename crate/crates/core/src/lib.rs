//! Robust linear discriminant analysis by ratio minimization of column-wise
//! ℓ₂-norm sums, together with the general fractional-programming solver it
//! rests on, classical LDA baselines, and a reproducible evaluation harness
//! for outlier/label-noise robustness experiments.

pub mod data_io;
pub mod error;
pub mod evaluation;
pub mod lda;
pub mod linalg;
pub mod norms;
pub mod ratio_solver;
pub mod rlda;

pub use error::{Error, Result};
pub use lda::{
    compute_scatter, default_dim_ratio_trace, default_dim_trace_ratio, ratio_trace_lda,
    trace_ratio_lda, LabeledDataset, ScatterSet,
};
pub use linalg::{DataMatrix, Projection};
pub use norms::SmoothingConfig;
pub use ratio_solver::{solve_ratio, RatioProblem, SolverTrace, StoppingRule};
pub use rlda::{fit_rlda, fit_rlda_from, InitPolicy, RldaConfig, RldaModel};
