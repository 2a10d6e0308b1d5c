use crate::error::{Error, Result};
use crate::quantum_model::ProbabilityTable;

/// Correlation `E_ij = Σ_{k,l} (−1)^{k+l} P(k,l | A_i, B_j)` of a two-outcome table.
pub fn correlation(table: &ProbabilityTable, i: usize, j: usize) -> f64 {
    let mut e = 0.0;
    for k in 0..2 {
        for l in 0..2 {
            let sign = if (k + l) % 2 == 0 { 1.0 } else { -1.0 };
            e += sign * table.get(i, j, k, l);
        }
    }
    e
}

/// Largest of the eight CHSH combinations `±(E₁₁ + E₁₂ + E₂₁ + E₂₂ − 2E_ij)`.
pub fn chsh_value(table: &ProbabilityTable) -> Result<f64> {
    if table.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: table.dim(),
        });
    }
    let e = [
        correlation(table, 0, 0),
        correlation(table, 0, 1),
        correlation(table, 1, 0),
        correlation(table, 1, 1),
    ];
    let total: f64 = e.iter().sum();
    Ok(e
        .iter()
        .flat_map(|&flip| {
            let s = total - 2.0 * flip;
            [s, -s]
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Closed-form noise threshold for two qubits: the CHSH inequalities are
/// necessary and sufficient there, so `F = max(0, 1 − 2/S)`.
pub fn chsh_oracle_threshold(table: &ProbabilityTable) -> Result<f64> {
    let s = chsh_value(table)?;
    if s <= 2.0 {
        Ok(0.0)
    } else {
        Ok((1.0 - 2.0 / s).clamp(0.0, 1.0))
    }
}
