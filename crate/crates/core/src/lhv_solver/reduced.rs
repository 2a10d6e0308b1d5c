//! Threshold values without the hidden model, optionally on a symmetry-reduced LP.
//!
//! Multiport tables satisfy `P_ij(k, l) = g_ij((k + l) mod N)`, which is
//! invariant under shifting Alice's outcomes by `+s` and Bob's by `−s` for
//! both settings at once. The constraint set and objective share that
//! symmetry and are convex, so averaging any optimal hidden model over the
//! shift orbit gives an optimal model constant on orbits. Restricting to such
//! models leaves `N³` orbit weights (orbits of `(k,m,l,n)` have exactly `N`
//! cells) and `4N` marginal rows, one per block and outcome-sum class.

use super::lp::{LpProblem, LpStatus};
use super::simplex::solve_lp;
use super::threshold::{build_lp_with_floor, noise_var, PAIRS};
use crate::error::{Error, Result};
use crate::quantum_model::ProbabilityTable;

/// Tables must match the shift symmetry to this accuracy before the reduced
/// LP is used.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LpReduction {
    /// The `N⁴ + 1` variable program.
    #[default]
    Full,
    /// Orbit weights under the joint outcome shift; `N³ + 1` variables.
    ShiftSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThresholdOptions {
    pub reduction: LpReduction,
    /// Lower bound on the noise variable. `0` gives the physical threshold;
    /// a negative floor lets tables that already admit a local model report
    /// a negative value measuring how much "anti-noise" they tolerate.
    pub floor: f64,
}

/// Largest `|P_ij(k, l) − P_ij(k', l')|` over outcome pairs with equal
/// `(k + l) mod N`.
pub fn shift_symmetry_defect(table: &ProbabilityTable) -> f64 {
    let dim = table.dim();
    let mut worst = 0.0_f64;
    for (i, j) in PAIRS {
        for k in 0..dim {
            for l in 0..dim {
                let reference = table.get(i, j, 0, (k + l) % dim);
                worst = worst.max((table.get(i, j, k, l) - reference).abs());
            }
        }
    }
    worst
}

/// Orbit representative `(0, m, l, n)` is stored at `(m·N + l)·N + n`.
pub fn build_lp_shift_symmetric(table: &ProbabilityTable, floor: f64) -> Result<LpProblem> {
    let defect = shift_symmetry_defect(table);
    if defect > SYMMETRY_TOL {
        return Err(Error::Domain {
            what: "shift-symmetry defect",
            value: defect,
        });
    }
    let dim = table.dim();
    let orbits = dim.pow(3);
    let num_vars = orbits + 1;
    let num_rows = 4 * dim + 1;
    let uniform = 1.0 / (dim * dim) as f64;
    let nf = dim as f64;

    let mut a = vec![0.0; num_rows * num_vars];
    for m in 0..dim {
        for l in 0..dim {
            for n in 0..dim {
                let col = (m * dim + l) * dim + n;
                // outcome-sum class per block for the representative k = 0
                let classes = [l, n, (m + l) % dim, (m + n) % dim];
                for (block, class) in classes.into_iter().enumerate() {
                    a[(block * dim + class) * num_vars + col] = 1.0;
                }
                a[(num_rows - 1) * num_vars + col] = 1.0;
            }
        }
    }
    let mut rhs = vec![0.0; num_rows];
    for (block, (i, j)) in PAIRS.into_iter().enumerate() {
        for class in 0..dim {
            let q: f64 = (0..dim).map(|k| table.get(i, j, k, (class + dim - k) % dim)).sum::<f64>() / nf;
            let row = block * dim + class;
            a[row * num_vars + orbits] = nf * (q - uniform);
            rhs[row] = nf * q - floor * nf * (q - uniform);
        }
    }
    rhs[num_rows - 1] = 1.0;
    let mut objective = vec![0.0; num_vars];
    objective[orbits] = 1.0;
    LpProblem::new(num_vars, num_rows, a, rhs, objective)
}

/// Optimal noise fraction (at least `options.floor`) without certification.
pub fn noise_threshold_value(table: &ProbabilityTable, options: &ThresholdOptions) -> Result<f64> {
    let (problem, f) = match options.reduction {
        LpReduction::Full => (
            build_lp_with_floor(table, options.floor),
            noise_var(table.dim()),
        ),
        LpReduction::ShiftSymmetric => (
            build_lp_shift_symmetric(table, options.floor)?,
            table.dim().pow(3),
        ),
    };
    let solution = solve_lp(&problem)?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.variable_values[f] + options.floor),
        _ => Err(Error::SolverNumerics {
            residual: f64::INFINITY,
        }),
    }
}
