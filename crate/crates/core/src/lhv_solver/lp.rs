use crate::error::{Error, Result};

/// `minimize objective·x  subject to  A·x = rhs,  x ≥ 0` with a dense,
/// row-major constraint matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    num_vars: usize,
    num_rows: usize,
    constraint_matrix: Vec<f64>,
    rhs: Vec<f64>,
    objective: Vec<f64>,
}

impl LpProblem {
    pub fn new(
        num_vars: usize,
        num_rows: usize,
        constraint_matrix: Vec<f64>,
        rhs: Vec<f64>,
        objective: Vec<f64>,
    ) -> Result<Self> {
        let shape = [
            (num_rows * num_vars, constraint_matrix.len()),
            (num_rows, rhs.len()),
            (num_vars, objective.len()),
        ];
        for (expected, actual) in shape {
            if expected != actual {
                return Err(Error::DimensionMismatch { expected, actual });
            }
        }
        let all = constraint_matrix.iter().chain(&rhs).chain(&objective);
        if let Some(&value) = all.into_iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "LP coefficient",
                value,
            });
        }
        Ok(Self {
            num_vars,
            num_rows,
            constraint_matrix,
            rhs,
            objective,
        })
    }

    /// Build from row vectors.
    pub fn from_rows(rows: &[Vec<f64>], rhs: Vec<f64>, objective: Vec<f64>) -> Result<Self> {
        let num_vars = objective.len();
        let mut dense = Vec::with_capacity(rows.len() * num_vars);
        for row in rows {
            if row.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    actual: row.len(),
                });
            }
            dense.extend_from_slice(row);
        }
        Self::new(num_vars, rows.len(), dense, rhs, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn constraint_matrix(&self) -> &[f64] {
        &self.constraint_matrix
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.constraint_matrix[r * self.num_vars..(r + 1) * self.num_vars]
    }

    #[inline]
    pub fn coefficient(&self, row: usize, var: usize) -> f64 {
        self.constraint_matrix[row * self.num_vars + var]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    /// `max_r |A_r·x − b_r|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        (0..self.num_rows)
            .map(|r| {
                let ax: f64 = self.row(r).iter().zip(x).map(|(a, v)| a * v).sum();
                (ax - self.rhs[r]).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective at the final basis; meaningful only when optimal.
    pub objective_value: f64,
    pub variable_values: Vec<f64>,
    /// Structural variables in the final basis, by row (redundant rows omitted).
    pub basis: Vec<usize>,
    pub iterations: usize,
}
