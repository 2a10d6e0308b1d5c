//! Linear-programming test for local hidden-variable models.

mod chsh;
mod lp;
mod reduced;
mod simplex;
mod threshold;

pub use chsh::{chsh_oracle_threshold, chsh_value, correlation};
pub use lp::{LpProblem, LpSolution, LpStatus};
pub use reduced::{
    build_lp_shift_symmetric, noise_threshold_value, shift_symmetry_defect, LpReduction,
    ThresholdOptions, SYMMETRY_TOL,
};
pub use simplex::{
    solve_lp, solve_lp_with, PivotRule, SimplexOptions, FEASIBILITY_TOL, OPTIMALITY_TOL, PIVOT_TOL,
};
pub use threshold::{
    build_lp, critical_noise_fraction, hidden_index, lhv_feasible_at, marginal_row, noise_var,
    verify_lhv_model, LhvThreshold, CERTIFICATE_TOL,
};
