use super::table::ProbabilityTable;
use super::unitary::UnitaryMatrix;
use crate::error::{Error, Result};

/// Joint probabilities for arbitrary local unitaries acting on the maximally
/// entangled state: `P(k,l | A_i,B_j) = (1/N)·|Σ_m (U_{A_i})_{mk} (U_{B_j})_{ml}|²`.
///
/// With `U = diag(e^{iφ})·U^N` this is exactly the phase-shifted multiport.
pub fn probability_table_general(
    u_a1: &UnitaryMatrix,
    u_a2: &UnitaryMatrix,
    u_b1: &UnitaryMatrix,
    u_b2: &UnitaryMatrix,
) -> Result<ProbabilityTable> {
    let n = u_a1.dim();
    for u in [u_a2, u_b1, u_b2] {
        if u.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: u.dim(),
            });
        }
    }
    let alice = [u_a1, u_a2];
    let bob = [u_b1, u_b2];
    let nf = n as f64;
    let mut entries = vec![0.0; 4 * n * n];
    for (i, ua) in alice.iter().enumerate() {
        for (j, ub) in bob.iter().enumerate() {
            for k in 0..n {
                for l in 0..n {
                    let amp: num_complex::Complex64 = (0..n).map(|m| ua.at(m, k) * ub.at(m, l)).sum();
                    entries[ProbabilityTable::index(n, i, j, k, l)] = amp.norm_sqr() / nf;
                }
            }
        }
    }
    ProbabilityTable::from_entries(n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_are_perfectly_correlated() {
        for n in 2..=5 {
            let id = UnitaryMatrix::identity(n).unwrap();
            let t = probability_table_general(&id, &id, &id, &id).unwrap();
            for b in 0..4 {
                for k in 0..n {
                    for l in 0..n {
                        let want = if k == l { 1.0 / n as f64 } else { 0.0 };
                        assert!((t.get(b / 2, b % 2, k, l) - want).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn mismatched_dimensions() {
        let a = UnitaryMatrix::identity(3).unwrap();
        let b = UnitaryMatrix::identity(2).unwrap();
        assert_eq!(
            probability_table_general(&a, &a, &a, &b),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        );
    }
}
