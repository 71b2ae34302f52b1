//! Scatter matrices and the two classical objectives: ratio-trace LDA (closed
//! form, one eigensolve) and trace-ratio LDA (iterative, via the ratio solver).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{largest_m_eigvecs, smallest_m_eigvecs, sym_eig, DataMatrix, Projection};
use crate::ratio_solver::{solve_ratio, RatioProblem, SolverTrace, StoppingRule};

/// A data matrix with per-column class labels in `{1..c}`.
///
/// Every class id occurs at least once, and the per-class column views keep
/// the original dataset order.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    x: DataMatrix,
    labels: Vec<usize>,
    class_count: usize,
    class_indices: Vec<Vec<usize>>,
}

impl LabeledDataset {
    pub fn new(x: DataMatrix, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != x.samples() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} samples",
                labels.len(),
                x.samples()
            )));
        }
        let class_count = *labels.iter().max().unwrap_or(&0);
        if class_count == 0 || labels.contains(&0) {
            return Err(Error::InvalidInput(
                "class labels must lie in {1..c}".into(),
            ));
        }
        let mut class_indices = vec![Vec::new(); class_count];
        for (j, &label) in labels.iter().enumerate() {
            class_indices[label - 1].push(j);
        }
        if let Some(empty) = class_indices.iter().position(|ix| ix.is_empty()) {
            return Err(Error::InvalidInput(format!(
                "class {} has no samples",
                empty + 1
            )));
        }
        Ok(Self {
            x,
            labels,
            class_count,
            class_indices,
        })
    }

    pub fn x(&self) -> &DataMatrix {
        &self.x
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    pub fn samples(&self) -> usize {
        self.x.samples()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    /// Original column indices of class `class` (1-based), ascending.
    pub fn class_indices(&self, class: usize) -> &[usize] {
        &self.class_indices[class - 1]
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.class_indices[class - 1].len()
    }

    /// The `d×n_i` block of samples belonging to `class` (1-based).
    pub fn class_matrix(&self, class: usize) -> DMatrix<f64> {
        let indices = self.class_indices(class);
        let values = self.x.values();
        let mut block = DMatrix::zeros(self.dim(), indices.len());
        for (k, &j) in indices.iter().enumerate() {
            block.set_column(k, &values.column(j));
        }
        block
    }

    /// Dataset restricted to `indices` (original order preserved by the caller).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&j| j >= self.samples()) {
            return Err(Error::InvalidInput("subset index out of range".into()));
        }
        let values = self.x.values();
        let mut block = DMatrix::zeros(self.dim(), indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for (k, &j) in indices.iter().enumerate() {
            block.set_column(k, &values.column(j));
            labels.push(self.labels[j]);
        }
        Self::new(DataMatrix::new(block)?, labels)
    }

    /// Same samples with replacement labels (lengths must match).
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self> {
        Self::new(self.x.clone(), labels)
    }
}

/// Within-class, between-class and total scatter, with the means they are
/// built from. `s_t = s_w + s_b` holds by construction.
#[derive(Debug, Clone)]
pub struct ScatterSet {
    pub s_w: DMatrix<f64>,
    pub s_b: DMatrix<f64>,
    pub s_t: DMatrix<f64>,
    pub class_means: Vec<DVector<f64>>,
    pub global_mean: DVector<f64>,
}

fn symmetrize(a: DMatrix<f64>) -> DMatrix<f64> {
    (&a + a.transpose()).scale(0.5)
}

/// Scatter matrices of a labeled dataset:
/// `S_w = Σ_i Σ_j (x_j^i − μ_i)(x_j^i − μ_i)ᵀ`,
/// `S_b = Σ_i n_i (μ_i − μ)(μ_i − μ)ᵀ`,
/// `S_t = Σ_k (x_k − μ)(x_k − μ)ᵀ`.
pub fn compute_scatter(data: &LabeledDataset) -> ScatterSet {
    let d = data.dim();
    let values = data.x().values();

    let mut global_mean = DVector::zeros(d);
    for j in 0..data.samples() {
        global_mean += values.column(j);
    }
    global_mean /= data.samples() as f64;

    let mut class_means = Vec::with_capacity(data.class_count());
    let mut s_w = DMatrix::zeros(d, d);
    let mut s_b = DMatrix::zeros(d, d);
    for class in 1..=data.class_count() {
        let indices = data.class_indices(class);
        let mut mean = DVector::zeros(d);
        for &j in indices {
            mean += values.column(j);
        }
        mean /= indices.len() as f64;
        for &j in indices {
            let dev = values.column(j) - &mean;
            s_w += &dev * dev.transpose();
        }
        let gap = &mean - &global_mean;
        s_b += (&gap * gap.transpose()).scale(indices.len() as f64);
        class_means.push(mean);
    }

    let mut s_t = DMatrix::zeros(d, d);
    for j in 0..data.samples() {
        let dev = values.column(j) - &global_mean;
        s_t += &dev * dev.transpose();
    }

    ScatterSet {
        s_w: symmetrize(s_w),
        s_b: symmetrize(s_b),
        s_t: symmetrize(s_t),
        class_means,
        global_mean,
    }
}

/// `(S_t⁺)^{1/2}` through the symmetric eigendecomposition, dropping
/// eigenvalues below `1e-12` times the largest.
fn pseudo_inverse_sqrt(s: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (vals, vecs) = sym_eig(s)?;
    let largest = vals.iter().cloned().fold(0.0f64, f64::max);
    let inv_sqrt = DVector::from_iterator(
        vals.len(),
        vals.iter()
            .map(|&v| if v > 1e-12 * largest { 1.0 / v.sqrt() } else { 0.0 }),
    );
    Ok(&vecs * DMatrix::from_diagonal(&inv_sqrt) * vecs.transpose())
}

/// Modified Gram-Schmidt over `candidates`, padding from `fill` until `m`
/// orthonormal columns are assembled. Used where a candidate basis may be
/// numerically rank-deficient (degenerate scatter).
fn complete_orthonormal(
    candidates: Vec<DVector<f64>>,
    fill: impl Iterator<Item = DVector<f64>>,
    d: usize,
    m: usize,
) -> Result<Projection> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
    for v in candidates.into_iter().chain(fill) {
        if basis.len() == m {
            break;
        }
        let mut u = v;
        for b in &basis {
            let coeff = b.dot(&u);
            u -= b.scale(coeff);
        }
        // repeat once: single-pass Gram-Schmidt loses orthogonality
        for b in &basis {
            let coeff = b.dot(&u);
            u -= b.scale(coeff);
        }
        let norm = u.norm();
        if norm > 1e-8 {
            basis.push(u / norm);
        }
    }
    if basis.len() < m {
        return Err(Error::RankDeficient(format!(
            "could only assemble {} of {m} orthonormal directions",
            basis.len()
        )));
    }
    let mut w = DMatrix::zeros(d, m);
    for (k, b) in basis.iter().enumerate() {
        w.set_column(k, b);
    }
    Projection::new(w)
}

fn identity_columns(d: usize) -> impl Iterator<Item = DVector<f64>> {
    (0..d).map(move |i| {
        let mut e = DVector::zeros(d);
        e[i] = 1.0;
        e
    })
}

/// Classical ratio-trace LDA: the leading eigenvectors of the scatter pencil,
/// re-orthonormalized.
///
/// The pencil is reduced symmetrically through `T = (S_t⁺)^{1/2}`: eigenpairs
/// of `T S_b T` map back as `w = T u`. This shares eigenvectors with
/// `S_w⁻¹ S_b` whenever `S_w` is invertible and stays well defined when it is
/// singular (directions of zero within-class scatter rank first).
pub fn ratio_trace_lda(data: &LabeledDataset, m: usize) -> Result<Projection> {
    let d = data.dim();
    if m < 1 || m > d {
        return Err(Error::InvalidInput(format!(
            "reduced dimension must satisfy 1 <= m <= d, got m={m}, d={d}"
        )));
    }
    let scatter = compute_scatter(data);
    let t = pseudo_inverse_sqrt(&scatter.s_t)?;
    let reduced = symmetrize(&t * &scatter.s_b * &t);
    let (_, vecs) = sym_eig(&reduced)?;
    let candidates: Vec<DVector<f64>> = (0..m.min(d))
        .map(|k| &t * vecs.column(d - 1 - k))
        .collect();
    // pad from the strongest total-scatter directions when S_b is rank-deficient
    let (_, t_vecs) = sym_eig(&scatter.s_t)?;
    let fill = (0..d)
        .map(move |k| t_vecs.column(d - 1 - k).into_owned())
        .chain(identity_columns(d));
    complete_orthonormal(candidates, fill, d, m)
}

/// Recommended reduced dimension for ratio-trace LDA: `min(c − 1, d)`.
pub fn default_dim_ratio_trace(class_count: usize, dim: usize) -> usize {
    class_count.saturating_sub(1).clamp(1, dim)
}

/// Recommended reduced dimension for trace-ratio LDA and the robust variant:
/// `min(3c, d)`.
pub fn default_dim_trace_ratio(class_count: usize, dim: usize) -> usize {
    (3 * class_count).clamp(1, dim)
}

struct TraceRatioProblem {
    s_w: DMatrix<f64>,
    s_t: DMatrix<f64>,
    m: usize,
}

impl RatioProblem for TraceRatioProblem {
    type State = Projection;

    fn numerator(&self, w: &Projection) -> f64 {
        (w.matrix().transpose() * &self.s_w * w.matrix()).trace()
    }

    fn denominator(&self, w: &Projection) -> f64 {
        (w.matrix().transpose() * &self.s_t * w.matrix()).trace()
    }

    fn subsolve(&mut self, lambda: f64, _w: &Projection) -> Result<Projection> {
        smallest_m_eigvecs(&(&self.s_w - self.s_t.scale(lambda)), self.m)
    }
}

/// Trace-ratio LDA, solved as the minimization
/// `Tr(WᵀS_wW)/Tr(WᵀS_tW)` over orthonormal `W` through the ratio solver;
/// each subproblem is solved exactly by an eigendecomposition. Maximizing the
/// between/within trace ratio is recovered as `1/λ − 1`.
pub fn trace_ratio_lda(
    data: &LabeledDataset,
    m: usize,
    rule: &StoppingRule,
) -> Result<(Projection, SolverTrace)> {
    let d = data.dim();
    if m < 1 || m > d {
        return Err(Error::InvalidInput(format!(
            "reduced dimension must satisfy 1 <= m <= d, got m={m}, d={d}"
        )));
    }
    let scatter = compute_scatter(data);
    if scatter.s_t.amax() <= 1e-14 * (1.0 + data.x().values().amax().powi(2)) {
        return Err(Error::InvalidInput(
            "total scatter is zero; all samples coincide".into(),
        ));
    }
    // start from the strongest total-scatter directions so Tr(WᵀS_tW) > 0
    let initial = largest_m_eigvecs(&scatter.s_t, m)?;
    let mut problem = TraceRatioProblem {
        s_w: scatter.s_w,
        s_t: scatter.s_t,
        m,
    };
    solve_ratio(&mut problem, initial, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_orthonormal;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// class1 = {(0,0),(2,0)}, class2 = {(0,2),(2,2)}
    fn four_point_toy() -> LabeledDataset {
        let x = DataMatrix::new(DMatrix::from_row_slice(
            2,
            4,
            &[0.0, 2.0, 0.0, 2.0, 0.0, 0.0, 2.0, 2.0],
        ))
        .unwrap();
        LabeledDataset::new(x, vec![1, 1, 2, 2]).unwrap()
    }

    fn two_gaussians(seed: u64, n_per_class: usize, gap: f64) -> LabeledDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2usize {
            let cx = if class == 0 { -gap / 2.0 } else { gap / 2.0 };
            for _ in 0..n_per_class {
                cols.push(DVector::from_vec(vec![
                    cx + rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                ]));
                labels.push(class + 1);
            }
        }
        LabeledDataset::new(DataMatrix::from_columns(&cols).unwrap(), labels).unwrap()
    }

    #[test]
    fn dataset_rejects_missing_class() {
        let x = DataMatrix::new(DMatrix::from_row_slice(1, 3, &[1.0, 2.0, 3.0])).unwrap();
        assert!(matches!(
            LabeledDataset::new(x, vec![1, 3, 3]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn scatter_of_four_point_toy() {
        let data = four_point_toy();
        let s = compute_scatter(&data);
        assert_eq!(s.class_means[0].as_slice(), &[1.0, 0.0]);
        assert_eq!(s.class_means[1].as_slice(), &[1.0, 2.0]);
        assert_eq!(s.global_mean.as_slice(), &[1.0, 1.0]);
        let sw = DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 0.0]);
        let sb = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 4.0]);
        assert!((s.s_w - &sw).amax() < 1e-12);
        assert!((s.s_b - &sb).amax() < 1e-12);
        assert!((s.s_t - (sw + sb)).amax() < 1e-12);
    }

    #[test]
    fn scatter_vanishes_for_singleton_classes() {
        let x = DataMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 3.0, 1.0, 5.0])).unwrap();
        let data = LabeledDataset::new(x, vec![1, 2]).unwrap();
        let s = compute_scatter(&data);
        assert!(s.s_w.amax() <= 1e-15);
    }

    #[test]
    fn scatter_of_identical_points_is_zero() {
        let x = DataMatrix::new(DMatrix::from_row_slice(2, 4, &[1.0; 8])).unwrap();
        let data = LabeledDataset::new(x, vec![1, 1, 2, 2]).unwrap();
        let s = compute_scatter(&data);
        assert!(s.s_w.amax() <= 1e-15);
        assert!(s.s_b.amax() <= 1e-15);
        assert!(s.s_t.amax() <= 1e-15);
    }

    #[test]
    fn scatter_matrices_are_psd_and_consistent() {
        let data = two_gaussians(71, 40, 3.0);
        let s = compute_scatter(&data);
        for mat in [&s.s_w, &s.s_b, &s.s_t] {
            let (vals, _) = sym_eig(mat).unwrap();
            assert!(vals.min() >= -1e-10 * (1.0 + mat.amax()));
        }
        let residual = (&s.s_t - (&s.s_w + &s.s_b)).norm();
        assert!(residual <= 1e-10 * s.s_t.norm());
    }

    #[test]
    fn scatter_invariant_under_permutation() {
        let data = two_gaussians(73, 15, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut perm: Vec<usize> = (0..data.samples()).collect();
        for i in (1..perm.len()).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let shuffled = data.subset(&perm).unwrap();
        let a = compute_scatter(&data);
        let b = compute_scatter(&shuffled);
        let scale = 1.0 + a.s_t.amax();
        assert!((a.s_w - b.s_w).amax() <= 1e-10 * scale);
        assert!((a.s_b - b.s_b).amax() <= 1e-10 * scale);
        assert!((a.s_t - b.s_t).amax() <= 1e-10 * scale);
    }

    #[test]
    fn ratio_trace_recovers_mean_difference_under_isotropic_scatter() {
        for seed in 0..3 {
            let data = two_gaussians(100 + seed, 20_000, 8.0);
            let w = ratio_trace_lda(&data, 1).unwrap();
            let s = compute_scatter(&data);
            let mean_gap = &s.class_means[0] - &s.class_means[1];
            let angle = crate::evaluation::direction_angle(&w.column(0), &mean_gap).unwrap();
            assert!(
                angle < 1.0_f64.to_radians(),
                "direction off by {} degrees",
                angle.to_degrees()
            );
        }
    }

    #[test]
    fn ratio_trace_handles_singular_within_scatter() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let d = 50;
        let n = 20;
        let mut x = DMatrix::from_fn(d, n, |_, _| rng.sample::<f64, _>(StandardNormal));
        for j in 0..n {
            if j >= n / 2 {
                x[(0, j)] += 5.0;
            }
        }
        let labels: Vec<usize> = (0..n).map(|j| if j < n / 2 { 1 } else { 2 }).collect();
        let data = LabeledDataset::new(DataMatrix::new(x).unwrap(), labels).unwrap();
        let w = ratio_trace_lda(&data, 1).unwrap();
        assert_eq!(w.dim(), d);
    }

    #[test]
    fn ratio_trace_on_toy_finds_second_axis() {
        let data = four_point_toy();
        let w = ratio_trace_lda(&data, 1).unwrap();
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        let angle = crate::evaluation::direction_angle(&w.column(0), &e2).unwrap();
        assert!(angle < 1e-8, "angle {angle}");
    }

    #[test]
    fn trace_ratio_on_toy_reaches_zero_objective() {
        let data = four_point_toy();
        let (w, trace) = trace_ratio_lda(&data, 1, &StoppingRule::default()).unwrap();
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        let angle = crate::evaluation::direction_angle(&w.column(0), &e2).unwrap();
        assert!(angle < 1e-8);
        assert!(trace.final_lambda().unwrap().abs() < 1e-12);
    }

    #[test]
    fn trace_ratio_matches_grid_scan_in_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        for _ in 0..20 {
            let classes = rng.random_range(2..=3usize);
            let mut cols = Vec::new();
            let mut labels = Vec::new();
            for class in 0..classes {
                let center = DVector::from_vec(vec![
                    rng.random_range(-4.0..4.0),
                    rng.random_range(-4.0..4.0),
                ]);
                for _ in 0..rng.random_range(8..20usize) {
                    cols.push(DVector::from_vec(vec![
                        center[0] + rng.sample::<f64, _>(StandardNormal),
                        center[1] + rng.sample::<f64, _>(StandardNormal),
                    ]));
                    labels.push(class + 1);
                }
            }
            let data =
                LabeledDataset::new(DataMatrix::from_columns(&cols).unwrap(), labels).unwrap();
            let rule = StoppingRule::new(1e-10, 200).unwrap();
            let (_, trace) = trace_ratio_lda(&data, 1, &rule).unwrap();

            let s = compute_scatter(&data);
            let mut best = f64::INFINITY;
            let mut theta = 0.0f64;
            while theta < std::f64::consts::PI {
                let w = DVector::from_vec(vec![theta.cos(), theta.sin()]);
                let num = (w.transpose() * &s.s_w * &w)[0];
                let den = (w.transpose() * &s.s_t * &w)[0];
                if den > 0.0 {
                    best = best.min(num / den);
                }
                theta += 0.001;
            }
            let got = trace.final_lambda().unwrap();
            assert!(
                (got - best).abs() <= 1e-4,
                "grid scan {best} vs solver {got}"
            );
        }
    }

    #[test]
    fn both_objectives_agree_under_isotropic_within_scatter() {
        // S_w ∝ I: both formulations reduce to the leading eigenvectors of S_b.
        let mut rng = ChaCha8Rng::seed_from_u64(131);
        let d = 6;
        let centers: Vec<DVector<f64>> = (0..3)
            .map(|_| DVector::from_fn(d, |_, _| rng.random_range(-6.0..6.0)))
            .collect();
        let mut cols = Vec::new();
        let mut labels = Vec::new();
        // symmetric point pairs around each center keep S_w exactly isotropic
        for (c, center) in centers.iter().enumerate() {
            for axis in 0..d {
                let mut offset = DVector::zeros(d);
                offset[axis] = 1.0;
                cols.push(center + &offset);
                cols.push(center - &offset);
                labels.push(c + 1);
                labels.push(c + 1);
            }
        }
        let data = LabeledDataset::new(DataMatrix::from_columns(&cols).unwrap(), labels).unwrap();
        let s = compute_scatter(&data);
        let off_diag = (&s.s_w - DMatrix::identity(d, d).scale(s.s_w[(0, 0)])).amax();
        assert!(off_diag < 1e-9, "S_w not isotropic: {off_diag}");

        let m = 2;
        let w_rt = ratio_trace_lda(&data, m).unwrap();
        let rule = StoppingRule::new(1e-12, 200).unwrap();
        let (w_tr, _) = trace_ratio_lda(&data, m, &rule).unwrap();
        let gap = (w_rt.projector() - w_tr.projector()).amax();
        assert!(gap <= 1e-6, "projector gap {gap}");
    }

    #[test]
    fn projection_energy_identity_for_orthonormal_bases() {
        // Σ‖Wᵀx‖² = Σ‖x‖² − Σ‖x − WWᵀx‖² for any orthonormal W and centered X
        let mut rng = ChaCha8Rng::seed_from_u64(137);
        for _ in 0..20 {
            let d = rng.random_range(3..10usize);
            let n = rng.random_range(5..30usize);
            let m = rng.random_range(1..=d);
            let raw = DMatrix::from_fn(d, n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let (x, _) = crate::linalg::center_columns(&DataMatrix::new(raw).unwrap());
            let w = random_orthonormal(d, m, &mut rng).unwrap();
            let projected: f64 = w.project(x.values()).column_iter().map(|c| c.norm_squared()).sum();
            let total: f64 = x.values().column_iter().map(|c| c.norm_squared()).sum();
            let residual_mat = x.values() - w.projector() * x.values();
            let residual: f64 = residual_mat.column_iter().map(|c| c.norm_squared()).sum();
            assert!(
                (projected - (total - residual)).abs() <= 1e-8 * (1.0 + total),
                "identity violated"
            );
        }
    }

    #[test]
    fn trace_ratio_objective_invariant_under_rotation() {
        let data = two_gaussians(139, 50, 4.0);
        let s = compute_scatter(&data);
        let mut rng = ChaCha8Rng::seed_from_u64(141);
        let w = random_orthonormal(2, 2, &mut rng).unwrap();
        let objective = |p: &DMatrix<f64>| {
            (p.transpose() * &s.s_w * p).trace() / (p.transpose() * &s.s_t * p).trace()
        };
        let base = objective(w.matrix());
        for _ in 0..20 {
            let r = random_orthonormal(2, 2, &mut rng).unwrap();
            let rotated = w.matrix() * r.matrix();
            assert!((objective(&rotated) - base).abs() <= 1e-10 * (1.0 + base.abs()));
        }
    }

    #[test]
    fn trace_ratio_rejects_degenerate_total_scatter() {
        let x = DataMatrix::new(DMatrix::from_row_slice(2, 4, &[2.0; 8])).unwrap();
        let data = LabeledDataset::new(x, vec![1, 1, 2, 2]).unwrap();
        assert!(matches!(
            trace_ratio_lda(&data, 1, &StoppingRule::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn dimension_bounds_are_enforced() {
        let data = four_point_toy();
        assert!(matches!(
            ratio_trace_lda(&data, 3),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            trace_ratio_lda(&data, 0, &StoppingRule::default()),
            Err(Error::InvalidInput(_))
        ));
        assert_eq!(default_dim_ratio_trace(4, 18), 3);
        assert_eq!(default_dim_trace_ratio(4, 18), 12);
        assert_eq!(default_dim_trace_ratio(8, 10), 10);
    }
}
