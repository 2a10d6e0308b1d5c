//! Two-phase primal simplex for dense standard-form LPs.
//!
//! The basis inverse is held explicitly as a dense `m×m` matrix and updated
//! by elementary row operations; the constraint matrix is only ever read
//! column by column through its nonzeros. Phase 1 starts from an all-artificial
//! basis. Artificials that cannot be pivoted out after phase 1 mark linearly
//! dependent rows and stay basic at zero.

use super::lp::{LpProblem, LpSolution, LpStatus};
use crate::error::{Error, Result};

/// Smallest admissible pivot element in the ratio test.
pub const PIVOT_TOL: f64 = 1e-10;
/// Phase-1 optimum above this declares the problem infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// A reduced cost must be below `-OPTIMALITY_TOL` to enter.
pub const OPTIMALITY_TOL: f64 = 1e-10;
/// Pivot threshold when driving artificials out after phase 1.
const DRIVE_OUT_TOL: f64 = 1e-8;
/// Bound relaxation in the two-pass ratio test.
const HARRIS_TOL: f64 = 1e-10;
/// Recompute `x_B` and duals from the inverse this often.
const REFRESH_EVERY: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables on every pivot.
    Bland,
    /// Most negative reduced cost; switches to Bland's rule after a run of
    /// degenerate pivots and back once the objective moves.
    #[default]
    DantzigBlandFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub pivot_rule: PivotRule,
    /// Pivot budget; `None` scales with the problem size.
    pub max_iterations: Option<usize>,
    /// Consecutive degenerate pivots tolerated before falling back to Bland.
    pub degenerate_limit: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_rule: PivotRule::default(),
            max_iterations: None,
            degenerate_limit: 40,
        }
    }
}

/// Solve with default options. A numerical failure on the default pivot rule
/// is retried from scratch under Bland's rule.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    match solve_lp_with(problem, &SimplexOptions::default()) {
        Err(Error::SolverNumerics { .. } | Error::SolverStall { .. }) => solve_lp_with(
            problem,
            &SimplexOptions {
                pivot_rule: PivotRule::Bland,
                ..SimplexOptions::default()
            },
        ),
        other => other,
    }
}

pub fn solve_lp_with(problem: &LpProblem, options: &SimplexOptions) -> Result<LpSolution> {
    let mut solver = Solver::new(problem, *options);

    if solver.run_phase()? == PhaseEnd::Unbounded {
        // phase 1 is bounded below by zero; only reachable through numerical failure
        return Err(Error::SolverNumerics {
            residual: f64::INFINITY,
        });
    }
    let infeasibility: f64 = (0..solver.m)
        .filter(|&i| solver.basis[i] >= solver.n)
        .map(|i| solver.xb[i].max(0.0))
        .sum();
    if infeasibility > FEASIBILITY_TOL {
        return Ok(solver.finish(LpStatus::Infeasible));
    }
    solver.drive_out_artificials();

    solver.enter_phase_two(problem.objective());
    for attempt in 0..3 {
        if solver.run_phase()? == PhaseEnd::Unbounded {
            return Ok(solver.finish(LpStatus::Unbounded));
        }
        let residual = solver.residual();
        if residual <= FEASIBILITY_TOL {
            break;
        }
        if attempt == 2 {
            return Err(Error::SolverNumerics { residual });
        }
        solver.reinvert()?;
    }
    Ok(solver.finish(LpStatus::Optimal))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PhaseEnd {
    Optimal,
    Unbounded,
}

/// Compressed column storage of the constraint matrix with rows sign-flipped
/// so the right-hand side is nonnegative.
struct Columns {
    start: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<f64>,
}

impl Columns {
    fn from_dense(p: &LpProblem, sign: &[f64]) -> Self {
        let (m, n) = (p.num_rows(), p.num_vars());
        let a = p.constraint_matrix();
        let mut count = vec![0usize; n + 1];
        for r in 0..m {
            for (j, &v) in a[r * n..(r + 1) * n].iter().enumerate() {
                if v != 0.0 {
                    count[j + 1] += 1;
                }
            }
        }
        for j in 0..n {
            count[j + 1] += count[j];
        }
        let nnz = count[n];
        let mut fill = count.clone();
        let mut rows = vec![0; nnz];
        let mut vals = vec![0.0; nnz];
        for r in 0..m {
            for (j, &v) in a[r * n..(r + 1) * n].iter().enumerate() {
                if v != 0.0 {
                    rows[fill[j]] = r;
                    vals[fill[j]] = sign[r] * v;
                    fill[j] += 1;
                }
            }
        }
        Self {
            start: count,
            rows,
            vals,
        }
    }

    #[inline]
    fn col(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.start[j]..self.start[j + 1];
        self.rows[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }
}

struct Solver {
    m: usize,
    n: usize,
    cols: Columns,
    b: Vec<f64>,
    /// Row-major explicit basis inverse.
    binv: Vec<f64>,
    /// Basic variable per row; `n + i` is the artificial of row `i`.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    xb: Vec<f64>,
    /// Simplex multipliers `c_B·B⁻¹` for the current phase.
    y: Vec<f64>,
    /// Costs of the current phase over structurals and artificials.
    cost: Vec<f64>,
    redundant: Vec<bool>,
    alpha: Vec<f64>,
    options: SimplexOptions,
    max_iterations: usize,
    iterations: usize,
    degenerate_run: usize,
}

impl Solver {
    fn new(p: &LpProblem, options: SimplexOptions) -> Self {
        let (m, n) = (p.num_rows(), p.num_vars());
        let sign: Vec<f64> = p
            .rhs()
            .iter()
            .map(|&b| if b < 0.0 { -1.0 } else { 1.0 })
            .collect();
        let b: Vec<f64> = p.rhs().iter().zip(&sign).map(|(b, s)| b * s).collect();
        let cols = Columns::from_dense(p, &sign);

        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = 1.0;
        }
        let mut is_basic = vec![false; n + m];
        is_basic[n..].iter_mut().for_each(|v| *v = true);
        let mut cost = vec![0.0; n + m];
        cost[n..].iter_mut().for_each(|c| *c = 1.0);

        Self {
            m,
            n,
            cols,
            xb: b.clone(),
            b,
            binv,
            basis: (n..n + m).collect(),
            is_basic,
            y: vec![1.0; m],
            cost,
            redundant: vec![false; m],
            alpha: vec![0.0; m],
            max_iterations: options.max_iterations.unwrap_or(50 * (m + n) + 1000),
            options,
            iterations: 0,
            degenerate_run: 0,
        }
    }

    #[inline]
    fn binv_row(&self, i: usize) -> &[f64] {
        &self.binv[i * self.m..(i + 1) * self.m]
    }

    /// `v·a_j` for a structural column.
    #[inline]
    fn col_dot(&self, j: usize, v: &[f64]) -> f64 {
        self.cols.col(j).map(|(r, a)| v[r] * a).sum()
    }

    /// `alpha ← B⁻¹·a_j`.
    fn ftran(&mut self, j: usize) {
        let m = self.m;
        self.alpha.iter_mut().for_each(|a| *a = 0.0);
        let range = self.cols.start[j]..self.cols.start[j + 1];
        for idx in range {
            let (r, a) = (self.cols.rows[idx], self.cols.vals[idx]);
            for i in 0..m {
                self.alpha[i] += self.binv[i * m + r] * a;
            }
        }
    }

    fn use_bland(&self) -> bool {
        self.options.pivot_rule == PivotRule::Bland
            || self.degenerate_run >= self.options.degenerate_limit
    }

    fn price(&self) -> Option<(usize, f64)> {
        let bland = self.use_bland();
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.n {
            if self.is_basic[j] {
                continue;
            }
            let d = self.cost[j] - self.col_dot(j, &self.y);
            if d < -OPTIMALITY_TOL {
                if bland {
                    return Some((j, d));
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best
    }

    /// Leaving row for the entering column held in `alpha`.
    ///
    /// Bland's rule takes the exact minimum ratio with the smallest basic
    /// index. Otherwise a two-pass (Harris) test relaxes each bound by
    /// [`HARRIS_TOL`] and picks the largest pivot among rows whose ratio
    /// stays within the relaxed minimum, which avoids tiny pivots on
    /// degenerate rows.
    fn ratio_test(&self) -> Option<usize> {
        let eligible = |i: usize| !self.redundant[i] && self.alpha[i] > PIVOT_TOL;
        let bland = self.use_bland();
        let relax = if bland { 0.0 } else { HARRIS_TOL };
        let mut bound = f64::INFINITY;
        for i in (0..self.m).filter(|&i| eligible(i)) {
            bound = bound.min((self.xb[i].max(0.0) + relax) / self.alpha[i]);
        }
        if !bound.is_finite() {
            return None;
        }
        let bound = bound + 1e-12 * (1.0 + bound);
        let mut chosen: Option<usize> = None;
        for i in (0..self.m).filter(|&i| eligible(i)) {
            if self.xb[i].max(0.0) / self.alpha[i] > bound {
                continue;
            }
            chosen = match chosen {
                None => Some(i),
                Some(c) if bland && self.basis[i] < self.basis[c] => Some(i),
                Some(c) if !bland && self.alpha[i] > self.alpha[c] => Some(i),
                keep => keep,
            };
        }
        chosen
    }

    fn pivot(&mut self, r: usize, q: usize, reduced_cost: f64) {
        let m = self.m;
        let piv = self.alpha[r];
        let theta = self.xb[r].max(0.0) / piv;
        for i in 0..m {
            self.xb[i] -= theta * self.alpha[i];
        }
        self.xb[r] = theta;

        let inv = 1.0 / piv;
        self.binv[r * m..(r + 1) * m].iter_mut().for_each(|v| *v *= inv);
        let (head, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, tail) = rest.split_at_mut(m);
        for (i, row) in head.chunks_exact_mut(m).enumerate() {
            let f = self.alpha[i];
            if f != 0.0 {
                row.iter_mut().zip(pivot_row.iter()).for_each(|(v, p)| *v -= f * p);
            }
        }
        for (off, row) in tail.chunks_exact_mut(m).enumerate() {
            let f = self.alpha[r + 1 + off];
            if f != 0.0 {
                row.iter_mut().zip(pivot_row.iter()).for_each(|(v, p)| *v -= f * p);
            }
        }
        if reduced_cost != 0.0 {
            self.y
                .iter_mut()
                .zip(pivot_row.iter())
                .for_each(|(y, p)| *y += reduced_cost * p);
        }

        self.is_basic[self.basis[r]] = false;
        self.basis[r] = q;
        self.is_basic[q] = true;
        self.iterations += 1;
    }

    fn run_phase(&mut self) -> Result<PhaseEnd> {
        let mut last_check = usize::MAX;
        loop {
            if self.iterations >= self.max_iterations {
                return Err(Error::SolverStall {
                    iterations: self.iterations,
                });
            }
            if self.iterations % REFRESH_EVERY == 0 {
                self.refresh();
            }
            let Some((q, d)) = self.price() else {
                if self.iterations == last_check {
                    return Ok(PhaseEnd::Optimal);
                }
                // confirm optimality against freshly recomputed duals
                last_check = self.iterations;
                self.reinvert()?;
                continue;
            };
            self.ftran(q);
            let Some(r) = self.ratio_test() else {
                return Ok(PhaseEnd::Unbounded);
            };
            let step = self.xb[r].max(0.0) / self.alpha[r];
            self.pivot(r, q, d);
            if step * d.abs() > 1e-14 {
                self.degenerate_run = 0;
            } else {
                self.degenerate_run += 1;
            }
        }
    }

    /// `x_B ← B⁻¹b` and `y ← c_B·B⁻¹` from the current inverse.
    fn refresh(&mut self) {
        let m = self.m;
        for i in 0..m {
            self.xb[i] = self.binv_row(i).iter().zip(&self.b).map(|(a, b)| a * b).sum();
        }
        self.y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..m {
            let c = self.cost[self.basis[i]];
            if c != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                self.y.iter_mut().zip(row).for_each(|(y, a)| *y += c * a);
            }
        }
    }

    /// Replace basic artificials by structurals where the row allows it;
    /// otherwise the row is a linear combination of others.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.n {
                continue;
            }
            let rho = self.binv_row(r).to_vec();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n {
                if self.is_basic[j] {
                    continue;
                }
                let a = self.col_dot(j, &rho).abs();
                if a > DRIVE_OUT_TOL && best.is_none_or(|(_, ba)| a > ba) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => {
                    self.ftran(j);
                    self.xb[r] = 0.0;
                    self.pivot(r, j, 0.0);
                }
                None => self.redundant[r] = true,
            }
        }
    }

    fn enter_phase_two(&mut self, objective: &[f64]) {
        self.cost[..self.n].copy_from_slice(objective);
        self.cost[self.n..].iter_mut().for_each(|c| *c = 0.0);
        self.degenerate_run = 0;
        self.refresh();
    }

    /// Rebuild the inverse from the basis columns by Gauss-Jordan elimination.
    fn reinvert(&mut self) -> Result<()> {
        let m = self.m;
        let mut bmat = vec![0.0; m * m];
        for (c, &var) in self.basis.iter().enumerate() {
            if var >= self.n {
                bmat[(var - self.n) * m + c] = 1.0;
            } else {
                for (r, a) in self.cols.col(var) {
                    bmat[r * m + c] = a;
                }
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let piv_row = (col..m)
                .max_by(|&a, &b| bmat[a * m + col].abs().total_cmp(&bmat[b * m + col].abs()))
                .expect("nonempty range");
            let piv = bmat[piv_row * m + col];
            if piv.abs() < 1e-13 {
                return Err(Error::SolverNumerics {
                    residual: f64::INFINITY,
                });
            }
            for k in 0..m {
                bmat.swap(col * m + k, piv_row * m + k);
                inv.swap(col * m + k, piv_row * m + k);
            }
            for k in 0..m {
                bmat[col * m + k] /= piv;
                inv[col * m + k] /= piv;
            }
            for r in 0..m {
                let f = bmat[r * m + col];
                if r != col && f != 0.0 {
                    for k in 0..m {
                        bmat[r * m + k] -= f * bmat[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        // Gauss-Jordan on B gives B⁻¹ with rows indexed by basis position
        self.binv = inv;
        self.refresh();
        Ok(())
    }

    fn primal_values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.n {
                x[var] = self.xb[i];
            }
        }
        x
    }

    /// Residual of `A·x = b` for the current basic solution, with `x ≥ 0`
    /// violations counted too.
    fn residual(&self) -> f64 {
        let x = self.primal_values();
        let mut ax = vec![0.0; self.m];
        for (j, &v) in x.iter().enumerate() {
            if v != 0.0 {
                for (r, a) in self.cols.col(j) {
                    ax[r] += a * v;
                }
            }
        }
        let eq = ax
            .iter()
            .zip(&self.b)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let neg = x.iter().fold(0.0_f64, |w, &v| w.max(-v));
        eq.max(neg)
    }

    fn finish(&self, status: LpStatus) -> LpSolution {
        let mut x = self.primal_values();
        for v in x.iter_mut() {
            if *v < 0.0 && *v > -FEASIBILITY_TOL {
                *v = 0.0;
            }
        }
        let objective_value = x.iter().zip(&self.cost[..self.n]).map(|(x, c)| x * c).sum();
        LpSolution {
            status,
            objective_value,
            variable_values: x,
            basis: self.basis.iter().copied().filter(|&v| v < self.n).collect(),
            iterations: self.iterations,
        }
    }
}
