//! Small dense linear systems.
//!
//! The moment systems assembled in [`crate::moment`] are at most a dozen rows,
//! so they are solved directly by Gaussian elimination with scaled partial
//! pivoting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pivots (relative to their row scale) below this magnitude are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

/// A square system `A x = b` whose rows carry a human readable label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseLinearSystem {
    pub matrix: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub row_labels: Vec<String>,
    /// 1-norm condition number estimate, filled in by [`DenseLinearSystem::new`].
    pub condition_estimate: f64,
}

impl DenseLinearSystem {
    pub fn new(matrix: Vec<Vec<f64>>, rhs: Vec<f64>, row_labels: Vec<String>) -> Result<Self> {
        let n = matrix.len();
        if rhs.len() != n || row_labels.len() != n {
            return Err(Error::Dimension(format!(
                "{} rows, {} right-hand sides, {} labels",
                n,
                rhs.len(),
                row_labels.len()
            )));
        }
        if let Some(bad) = matrix.iter().position(|row| row.len() != n) {
            return Err(Error::Dimension(format!(
                "system is not square: row {} has {} columns, expected {}",
                bad,
                matrix[bad].len(),
                n
            )));
        }
        let mut system = Self {
            matrix,
            rhs,
            row_labels,
            condition_estimate: f64::INFINITY,
        };
        system.condition_estimate = system.estimate_condition();
        Ok(system)
    }

    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    /// Solves the system, failing if any scaled pivot falls below [`PIVOT_TOLERANCE`].
    pub fn solve(&self) -> Result<Vec<f64>> {
        let columns = self.solve_many(std::slice::from_ref(&self.rhs))?;
        Ok(columns.into_iter().next().unwrap_or_default())
    }

    fn solve_many(&self, rhs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let n = self.size();
        let mut a = self.matrix.clone();
        let mut b: Vec<Vec<f64>> = (0..n)
            .map(|i| rhs.iter().map(|col| col[i]).collect())
            .collect();
        let mut labels: Vec<usize> = (0..n).collect();
        let scale: Vec<f64> = a
            .iter()
            .map(|row| row.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .collect();
        let mut scale = scale;

        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| {
                    let s = if scale[r] > 0.0 { scale[r] } else { 1.0 };
                    (r, a[r][col].abs() / s)
                })
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag < PIVOT_TOLERANCE {
                return Err(Error::Rank {
                    constraint: self.row_labels[labels[pivot_row]].clone(),
                    pivot: pivot_mag,
                });
            }
            a.swap(col, pivot_row);
            b.swap(col, pivot_row);
            labels.swap(col, pivot_row);
            scale.swap(col, pivot_row);

            for r in col + 1..n {
                let factor = a[r][col] / a[col][col];
                if factor == 0.0 {
                    continue;
                }
                for c in col..n {
                    a[r][c] -= factor * a[col][c];
                }
                for k in 0..rhs.len() {
                    b[r][k] -= factor * b[col][k];
                }
            }
        }

        let mut x = vec![vec![0.0; n]; rhs.len()];
        for k in 0..rhs.len() {
            for row in (0..n).rev() {
                let tail: f64 = (row + 1..n).map(|c| a[row][c] * x[k][c]).sum();
                x[k][row] = (b[row][k] - tail) / a[row][row];
            }
        }
        Ok(x)
    }

    fn estimate_condition(&self) -> f64 {
        let n = self.size();
        if n == 0 {
            return 1.0;
        }
        let identity: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        match self.solve_many(&identity) {
            Ok(inverse_columns) => {
                let norm_a = (0..n)
                    .map(|c| (0..n).map(|r| self.matrix[r][c].abs()).sum::<f64>())
                    .fold(0.0, f64::max);
                let norm_inv = inverse_columns
                    .iter()
                    .map(|col| col.iter().map(|v| v.abs()).sum::<f64>())
                    .fold(0.0, f64::max);
                norm_a * norm_inv
            }
            Err(_) => f64::INFINITY,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("row {i}")).collect()
    }

    #[test]
    fn solves_permuted_system() {
        let sys = DenseLinearSystem::new(
            vec![vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]],
            vec![5.0, 3.0, 6.0],
            labels(3),
        )
        .unwrap();
        let x = sys.solve().unwrap();
        for (xi, want) in x.iter().zip([1.4, 1.6, 1.8]) {
            assert!((xi - want).abs() < 1e-14, "{x:?}");
        }
        assert!(sys.condition_estimate.is_finite());
    }

    #[test]
    fn singular_system_names_constraint() {
        let sys = DenseLinearSystem::new(
            vec![vec![1.0, 2.0], vec![2.0, 4.0]],
            vec![1.0, 2.0],
            vec!["mass".into(), "duplicate".into()],
        )
        .unwrap();
        match sys.solve() {
            Err(Error::Rank { constraint, .. }) => assert_eq!(constraint, "duplicate"),
            other => panic!("expected rank error, got {other:?}"),
        }
        assert!(sys.condition_estimate.is_infinite());
    }

    #[test]
    fn rejects_non_square() {
        let err = DenseLinearSystem::new(vec![vec![1.0, 2.0]], vec![1.0], labels(1)).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }
}
