//! Dense matrix primitives shared by the solvers: symmetric eigendecomposition,
//! orthonormalization and column centering.
//!
//! Everything here is a pure function on immutable inputs. Eigenvector signs
//! follow a fixed convention (largest-magnitude entry positive) so that
//! repeated runs are bit-reproducible; callers that need subspace-level
//! comparisons should compare projectors `W Wᵀ` instead of columns.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance for the column-orthonormality invariant `WᵀW = I`.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// A dense real matrix holding one sample per column (`d` features, `n` samples).
///
/// All entries are finite and both dimensions are at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
}

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::InvalidInput(format!(
                "data matrix must be non-empty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(
                "data matrix contains non-finite entries".into(),
            ));
        }
        Ok(Self { values })
    }

    /// Builds a matrix from sample columns; all columns must share one dimension.
    pub fn from_columns(columns: &[DVector<f64>]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidInput("no columns given".into()));
        }
        let d = columns[0].len();
        if columns.iter().any(|c| c.len() != d) {
            return Err(Error::InvalidInput("columns differ in length".into()));
        }
        Self::new(DMatrix::from_fn(d, columns.len(), |i, j| columns[j][i]))
    }

    /// Feature count `d`.
    pub fn dim(&self) -> usize {
        self.values.nrows()
    }

    /// Sample count `n`.
    pub fn samples(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.values
    }

    pub fn column(&self, j: usize) -> DVector<f64> {
        self.values.column(j).into_owned()
    }
}

/// A column-orthonormal projection matrix `W` of shape `d×m`, `1 ≤ m ≤ d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    w: DMatrix<f64>,
}

impl Projection {
    pub fn new(w: DMatrix<f64>) -> Result<Self> {
        let (d, m) = (w.nrows(), w.ncols());
        if m < 1 || m > d {
            return Err(Error::InvalidInput(format!(
                "projection must satisfy 1 <= m <= d, got d={d}, m={m}"
            )));
        }
        if !w.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(
                "projection contains non-finite entries".into(),
            ));
        }
        let gram_residual = (w.transpose() * &w - DMatrix::identity(m, m)).amax();
        if gram_residual > ORTHONORMALITY_TOL {
            return Err(Error::InvalidInput(format!(
                "columns are not orthonormal: max |WᵀW - I| = {gram_residual:.3e}"
            )));
        }
        Ok(Self { w })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    /// Reduced dimension `m`.
    pub fn reduced_dim(&self) -> usize {
        self.w.ncols()
    }

    pub fn column(&self, k: usize) -> DVector<f64> {
        self.w.column(k).into_owned()
    }

    /// The orthogonal projector `W Wᵀ` onto the column span.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.w * self.w.transpose()
    }

    /// Applies `Wᵀ` to a `d×n` matrix, producing `m×n` coordinates.
    pub fn project(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self.w.transpose() * x
    }
}

fn ensure_square_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidInput(format!(
            "matrix must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    let asym = (a - a.transpose()).amax();
    if asym > 1e-10 * (1.0 + a.amax()) {
        return Err(Error::InvalidInput(format!(
            "matrix is not symmetric: max |A - Aᵀ| = {asym:.3e}"
        )));
    }
    Ok(())
}

/// Fixes the sign of each column so its largest-magnitude entry is positive.
/// Among tied magnitudes the first entry decides.
fn fix_column_signs(q: &mut DMatrix<f64>) {
    for j in 0..q.ncols() {
        let mut lead = 0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..q.nrows() {
            let mag = q[(i, j)].abs();
            if mag > best {
                best = mag;
                lead = i;
            }
        }
        if q[(lead, j)] < 0.0 {
            for i in 0..q.nrows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
}

/// Eigendecomposition of a symmetric matrix.
///
/// The input is symmetrized as `(A + Aᵀ)/2` to absorb assembly round-off.
/// Eigenvalues come back sorted ascending with matching eigenvector columns;
/// each column's sign makes its largest-magnitude entry positive.
pub fn sym_eig(a: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    ensure_square_symmetric(a)?;
    let d = a.nrows();
    let sym = (a + a.transpose()).scale(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let values = DVector::from_iterator(d, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    fix_column_signs(&mut vectors);
    Ok((values, vectors))
}

/// The eigenvectors belonging to the `m` smallest eigenvalues of a symmetric matrix.
pub fn smallest_m_eigvecs(a: &DMatrix<f64>, m: usize) -> Result<Projection> {
    let d = a.nrows();
    if m < 1 || m > d {
        return Err(Error::InvalidInput(format!(
            "m must satisfy 1 <= m <= d, got m={m}, d={d}"
        )));
    }
    let (_, vectors) = sym_eig(a)?;
    Projection::new(vectors.columns(0, m).into_owned())
}

/// The eigenvectors belonging to the `m` largest eigenvalues, strongest first.
pub fn largest_m_eigvecs(a: &DMatrix<f64>, m: usize) -> Result<Projection> {
    let d = a.nrows();
    if m < 1 || m > d {
        return Err(Error::InvalidInput(format!(
            "m must satisfy 1 <= m <= d, got m={m}, d={d}"
        )));
    }
    let (_, vectors) = sym_eig(a)?;
    let mut w = DMatrix::zeros(d, m);
    for k in 0..m {
        w.set_column(k, &vectors.column(d - 1 - k));
    }
    Projection::new(w)
}

/// Orthonormalizes the columns of `b`, preserving their span.
///
/// Fails with [`Error::RankDeficient`] when the smallest singular value is
/// below `1e-12` times the largest.
pub fn orthonormalize(b: &DMatrix<f64>) -> Result<Projection> {
    let (d, m) = (b.nrows(), b.ncols());
    if m < 1 || m > d {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m <= d columns, got d={d}, m={m}"
        )));
    }
    if !b.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    let singular = b.clone().singular_values();
    let smax = singular.max();
    let smin = singular.min();
    if smin.is_nan() || smin <= 1e-12 * smax || smax == 0.0 {
        return Err(Error::RankDeficient(format!(
            "smallest singular value {smin:.3e} <= 1e-12 * largest {smax:.3e}"
        )));
    }
    let qr = b.clone().qr();
    let mut q = qr.q();
    fix_column_signs(&mut q);
    Projection::new(q)
}

/// Removes the column mean from every sample, returning the centered matrix
/// and the mean. A second pass absorbs the round-off of the first subtraction.
pub fn center_columns(x: &DataMatrix) -> (DataMatrix, DVector<f64>) {
    let values = x.values();
    let (d, n) = (values.nrows(), values.ncols());
    let mut mean = DVector::zeros(d);
    for j in 0..n {
        mean += values.column(j);
    }
    mean /= n as f64;

    let mut centered = values.clone();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }
    let mut residual = DVector::zeros(d);
    for j in 0..n {
        residual += centered.column(j);
    }
    residual /= n as f64;
    for mut col in centered.column_iter_mut() {
        col -= &residual;
    }
    (
        DataMatrix::new(centered).expect("centering preserves finiteness"),
        mean,
    )
}

/// A seeded, uniformly distributed column-orthonormal `d×m` matrix
/// (QR of a standard Gaussian draw, signs fixed).
pub fn random_orthonormal<R: Rng + ?Sized>(d: usize, m: usize, rng: &mut R) -> Result<Projection> {
    if m < 1 || m > d {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m <= d, got d={d}, m={m}"
        )));
    }
    loop {
        let g = DMatrix::from_fn(d, m, |_, _| rng.sample::<f64, _>(StandardNormal));
        match orthonormalize(&g) {
            Ok(p) => return Ok(p),
            // A Gaussian draw is rank-deficient with probability zero; retry.
            Err(Error::RankDeficient(_)) => continue,
            Err(e) => return Err(e),
        }
    }
}
