//! Column-wise matrix norms and the smoothed reweighting quantities used by
//! the robust objective.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smoothing constant for `√(‖v‖² + ε)`, keeping reweighting terms finite at
/// zero residual. Any value approaching zero works; the default is 1e-12.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    epsilon: f64,
}

impl SmoothingConfig {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon < 0.0 || !epsilon.is_finite() {
            return Err(Error::InvalidInput(format!(
                "smoothing epsilon must be finite and >= 0, got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self { epsilon: 1e-12 }
    }
}

/// `‖X‖₁,₂`: the sum of the ℓ₂ norms of the columns of `x`.
pub fn l12_norm(x: &DMatrix<f64>) -> f64 {
    x.column_iter().map(|c| c.norm()).sum()
}

/// `Σ_j √(‖x_j‖² + ε)`: the smoothed ℓ₁,₂ norm. Equals [`l12_norm`] at ε = 0
/// and upper-bounds it for ε > 0.
pub fn smoothed_l12_norm(x: &DMatrix<f64>, cfg: &SmoothingConfig) -> f64 {
    x.column_iter()
        .map(|c| (c.norm_squared() + cfg.epsilon()).sqrt())
        .sum()
}

/// The reweighting vector with entries `1/(2√(‖x_j‖² + ε))`, one per column.
///
/// With ε = 0 a zero column makes the weight blow up; that case is refused.
pub fn inverse_halved_norms(columns: &DMatrix<f64>, cfg: &SmoothingConfig) -> Result<DVector<f64>> {
    let mut weights = DVector::zeros(columns.ncols());
    for (j, c) in columns.column_iter().enumerate() {
        let denom = (c.norm_squared() + cfg.epsilon()).sqrt();
        if denom == 0.0 {
            return Err(Error::DegenerateWeight(format!(
                "column {j} has zero norm and epsilon is zero"
            )));
        }
        weights[j] = 0.5 / denom;
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn random_matrix(d: usize, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        DMatrix::from_fn(d, n, |_, _| rng.sample::<f64, _>(StandardNormal))
    }

    #[test]
    fn l12_of_three_four_five_column() {
        let x = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 4.0, 0.0]);
        assert_eq!(l12_norm(&x), 5.0);
    }

    #[test]
    fn l12_of_identity() {
        assert_eq!(l12_norm(&DMatrix::<f64>::identity(2, 2)), 2.0);
    }

    #[test]
    fn l12_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_matrix(4, 7, &mut rng);
        let mut expected = 0.0;
        for j in 0..7 {
            let mut s = 0.0;
            for i in 0..4 {
                s += x[(i, j)] * x[(i, j)];
            }
            expected += s.sqrt();
        }
        assert!((l12_norm(&x) - expected).abs() <= 1e-12 * (1.0 + expected));
    }

    #[test]
    fn smoothed_norm_of_zero_matrix() {
        let x = DMatrix::<f64>::zeros(3, 2);
        let cfg = SmoothingConfig::new(1e-4).unwrap();
        assert!((smoothed_l12_norm(&x, &cfg) - 2e-2).abs() < 1e-15);
    }

    #[test]
    fn smoothed_norm_reduces_to_plain_at_zero_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_matrix(3, 6, &mut rng);
        let cfg = SmoothingConfig::new(0.0).unwrap();
        assert_eq!(smoothed_l12_norm(&x, &cfg), l12_norm(&x));
    }

    #[test]
    fn smoothed_norm_close_to_plain_for_tiny_epsilon() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_matrix(5, 11, &mut rng);
        let cfg = SmoothingConfig::default();
        let gap = smoothed_l12_norm(&x, &cfg) - l12_norm(&x);
        assert!(gap >= 0.0);
        assert!(gap <= 11.0 * cfg.epsilon().sqrt());
    }

    #[test]
    fn weights_of_three_four_column() {
        let x = DMatrix::from_row_slice(2, 1, &[3.0, 4.0]);
        let cfg = SmoothingConfig::new(0.0).unwrap();
        let w = inverse_halved_norms(&x, &cfg).unwrap();
        assert!((w[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn weight_of_zero_column_with_smoothing() {
        let x = DMatrix::<f64>::zeros(3, 1);
        let cfg = SmoothingConfig::default();
        let w = inverse_halved_norms(&x, &cfg).unwrap();
        assert!((w[0] - 5e5).abs() <= 1e-6);
    }

    #[test]
    fn weight_of_zero_column_without_smoothing_is_degenerate() {
        let x = DMatrix::<f64>::zeros(3, 1);
        let cfg = SmoothingConfig::new(0.0).unwrap();
        assert!(matches!(
            inverse_halved_norms(&x, &cfg),
            Err(Error::DegenerateWeight(_))
        ));
    }

    #[test]
    fn weights_match_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x = random_matrix(3, 5, &mut rng);
        let cfg = SmoothingConfig::default();
        let w = inverse_halved_norms(&x, &cfg).unwrap();
        for j in 0..5 {
            let direct = 0.5 / (x.column(j).norm_squared() + cfg.epsilon()).sqrt();
            assert!((w[j] - direct).abs() <= 1e-12 * direct);
            assert!(w[j] > 0.0 && w[j].is_finite());
        }
    }

    /// The inequality the reweighting scheme rests on:
    /// if Σ‖ṽ_i‖²/(2‖v_i‖) ≤ Σ‖v_i‖²/(2‖v_i‖) then Σ‖ṽ_i‖ ≤ Σ‖v_i‖.
    /// Pairs are constructed so the antecedent holds, then the consequent is checked.
    #[test]
    fn reweighting_inequality_on_constructed_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let n = rng.random_range(1..8usize);
            let d = rng.random_range(1..6usize);
            let v = random_matrix(d, n, &mut rng);
            let mut vt = random_matrix(d, n, &mut rng);
            let lhs = |m: &DMatrix<f64>| -> f64 {
                (0..n)
                    .map(|j| m.column(j).norm_squared() / (2.0 * v.column(j).norm()))
                    .sum()
            };
            let bound = lhs(&v);
            let mut got = lhs(&vt);
            if got > bound {
                // shrink until the antecedent holds
                vt *= (bound / got).sqrt() * 0.999;
                got = lhs(&vt);
            }
            assert!(got <= bound * (1.0 + 1e-12));
            assert!(l12_norm(&vt) <= l12_norm(&v) * (1.0 + 1e-12));
        }
    }

    proptest! {
        #[test]
        fn l12_absolute_homogeneity(c in -50.0..50.0f64, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_matrix(3, 4, &mut rng);
            let scaled = x.scale(c);
            let lhs = l12_norm(&scaled);
            let rhs = c.abs() * l12_norm(&x);
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs));
        }

        #[test]
        fn l12_triangle_inequality(seed in 0u64..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = random_matrix(4, 6, &mut rng);
            let y = random_matrix(4, 6, &mut rng);
            prop_assert!(l12_norm(&(&x + &y)) <= l12_norm(&x) + l12_norm(&y) + 1e-12);
        }
    }
}
