//! The threshold LP: smallest noise fraction at which a local hidden-variable
//! model reproduces all `4N²` noisy joint probabilities.

use super::lp::{LpProblem, LpStatus};
use super::simplex::solve_lp;
use crate::error::{Error, Result};
use crate::quantum_model::ProbabilityTable;

/// Certified bound on the marginal mismatch of a returned model.
pub const CERTIFICATE_TOL: f64 = 1e-8;

/// Minimal noise fraction together with a hidden joint distribution that
/// reproduces the noisy table at that fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct LhvThreshold {
    pub f_min: f64,
    /// `P(k, m; l, n)` over outcomes of `A_1, A_2, B_1, B_2`, see [`hidden_index`].
    pub hidden: Vec<f64>,
    /// Largest marginal mismatch found by [`verify_lhv_model`].
    pub residual: f64,
    pub lp_iterations: usize,
}

/// Position of `P(k, m; l, n)` in the hidden distribution, where `k, m` are
/// Alice's outcomes for `A_1, A_2` and `l, n` Bob's for `B_1, B_2`.
#[inline]
pub fn hidden_index(dim: usize, k: usize, m: usize, l: usize, n: usize) -> usize {
    ((k * dim + m) * dim + l) * dim + n
}

/// Index of the noise-fraction variable in [`build_lp`]'s layout.
pub fn noise_var(dim: usize) -> usize {
    dim.pow(4)
}

/// Row of the marginal constraint for setting pair `(A_i, B_j)` and outcomes
/// `(a, b)`; the normalization row comes last.
#[inline]
pub fn marginal_row(dim: usize, i: usize, j: usize, a: usize, b: usize) -> usize {
    ((2 * i + j) * dim + a) * dim + b
}

/// Outcomes `(a, b)` that hidden cell `(k, m, l, n)` contributes for pair `(i, j)`.
#[inline]
fn outcomes_for_pair(i: usize, j: usize, cell: [usize; 4]) -> (usize, usize) {
    let [k, m, l, n] = cell;
    ([k, m][i], [l, n][j])
}

/// Variables: `N⁴` hidden probabilities then `f`. Rows: for every setting pair
/// and outcome pair, `marginal(x) + f·(Q − 1/N²) = Q`, then `Σx = 1`.
/// Objective: minimize `f`.
pub fn build_lp(table: &ProbabilityTable) -> LpProblem {
    build_lp_with_floor(table, 0.0)
}

/// [`build_lp`] with the noise variable shifted to `f − floor ≥ 0`, so the LP
/// can report how far inside the local region a table lies when `floor < 0`.
pub(crate) fn build_lp_with_floor(table: &ProbabilityTable, floor: f64) -> LpProblem {
    let dim = table.dim();
    let n_hidden = dim.pow(4);
    let num_vars = n_hidden + 1;
    let num_rows = 4 * dim * dim + 1;
    let f = noise_var(dim);
    let uniform = 1.0 / (dim * dim) as f64;

    let mut a = vec![0.0; num_rows * num_vars];
    let mut rhs = vec![0.0; num_rows];
    for cell in cells(dim) {
        let col = hidden_index(dim, cell[0], cell[1], cell[2], cell[3]);
        for (i, j) in PAIRS {
            let (oa, ob) = outcomes_for_pair(i, j, cell);
            a[marginal_row(dim, i, j, oa, ob) * num_vars + col] = 1.0;
        }
        a[(num_rows - 1) * num_vars + col] = 1.0;
    }
    for (i, j) in PAIRS {
        for oa in 0..dim {
            for ob in 0..dim {
                let row = marginal_row(dim, i, j, oa, ob);
                let q = table.get(i, j, oa, ob);
                a[row * num_vars + f] = q - uniform;
                rhs[row] = q - floor * (q - uniform);
            }
        }
    }
    rhs[num_rows - 1] = 1.0;
    let mut objective = vec![0.0; num_vars];
    objective[f] = 1.0;
    LpProblem::new(num_vars, num_rows, a, rhs, objective).expect("consistent LP shape")
}

pub(crate) const PAIRS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

pub(crate) fn cells(dim: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..dim.pow(4)).map(move |idx| {
        [
            idx / (dim * dim * dim),
            (idx / (dim * dim)) % dim,
            (idx / dim) % dim,
            idx % dim,
        ]
    })
}

/// Solve the threshold LP for `table` and certify the resulting model.
pub fn critical_noise_fraction(table: &ProbabilityTable) -> Result<LhvThreshold> {
    let dim = table.dim();
    let problem = build_lp(table);
    let solution = solve_lp(&problem)?;
    if solution.status != LpStatus::Optimal {
        // f = 1 with the uniform model is always feasible and f ≥ 0 bounds the objective
        return Err(Error::SolverNumerics {
            residual: f64::INFINITY,
        });
    }
    let mut x = solution.variable_values;
    let f_min = x[noise_var(dim)].clamp(0.0, 1.0);
    x.truncate(noise_var(dim));
    let mut threshold = LhvThreshold {
        f_min,
        hidden: x,
        residual: 0.0,
        lp_iterations: solution.iterations,
    };
    threshold.residual = verify_lhv_model(&threshold, table)?;
    if threshold.residual >= CERTIFICATE_TOL {
        return Err(Error::SolverNumerics {
            residual: threshold.residual,
        });
    }
    Ok(threshold)
}

/// Largest absolute gap between the marginals of `t.hidden` and the noisy
/// table `F/N² + (1−F)·table` at `F = t.f_min`.
pub fn verify_lhv_model(t: &LhvThreshold, table: &ProbabilityTable) -> Result<f64> {
    let dim = table.dim();
    if t.hidden.len() != dim.pow(4) {
        return Err(Error::DimensionMismatch {
            expected: dim.pow(4),
            actual: t.hidden.len(),
        });
    }
    let mut marginals = vec![0.0; 4 * dim * dim];
    for (cell, &p) in cells(dim).zip(&t.hidden) {
        for (i, j) in PAIRS {
            let (oa, ob) = outcomes_for_pair(i, j, cell);
            marginals[ProbabilityTable::index(dim, i, j, oa, ob)] += p;
        }
    }
    let uniform = 1.0 / (dim * dim) as f64;
    let worst = marginals
        .iter()
        .zip(table.entries())
        .map(|(m, q)| (m - (t.f_min * uniform + (1.0 - t.f_min) * q)).abs())
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Whether a local model exists for `table` mixed with noise fraction `noise`.
pub fn lhv_feasible_at(table: &ProbabilityTable, noise: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::Domain {
            what: "noise fraction",
            value: noise,
        });
    }
    let dim = table.dim();
    let p = build_lp(table);
    // pin f by folding its column into the right-hand side
    let f = noise_var(dim);
    let (rows, vars) = (p.num_rows(), p.num_vars());
    let mut dense = p.constraint_matrix().to_vec();
    let mut rhs = p.rhs().to_vec();
    for r in 0..rows - 1 {
        rhs[r] -= noise * dense[r * vars + f];
        dense[r * vars + f] = 0.0;
    }
    let pinned = LpProblem::new(vars, rows, dense, rhs, vec![0.0; vars])?;
    Ok(solve_lp(&pinned)?.status == LpStatus::Optimal)
}
