use crate::error::{Error, Result};

/// Probabilities below zero by less than this are rounding residue and get
/// clamped to zero.
pub const NEGATIVE_RESIDUE: f64 = 1e-14;

/// Pure-state joint probabilities `P(k,l | A_i, B_j)` for the four setting
/// pairs, all indices 0-based.
///
/// Storage is block-major: block `2i + j` holds the N×N outcome matrix for
/// the pair `(A_i, B_j)`, row `k` (Alice), column `l` (Bob).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    dim: usize,
    entries: Vec<f64>,
}

impl ProbabilityTable {
    pub fn from_entries(dim: usize, mut entries: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let expected = 4 * dim * dim;
        if entries.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: entries.len(),
            });
        }
        for p in entries.iter_mut() {
            if !p.is_finite() || *p < -NEGATIVE_RESIDUE || *p > 1.0 + 1e-12 {
                return Err(Error::Domain {
                    what: "probability",
                    value: *p,
                });
            }
            *p = p.clamp(0.0, 1.0);
        }
        Ok(Self { dim, entries })
    }

    /// Every entry `1/N²`: the table of pure noise.
    pub fn uniform(dim: usize) -> Result<Self> {
        let u = 1.0 / (dim * dim) as f64;
        Self::from_entries(dim, vec![u; 4 * dim * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn index(dim: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((2 * i + j) * dim + k) * dim + l
    }

    /// `P(k,l | A_i, B_j)`; panics on out-of-range indices.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        assert!(i < 2 && j < 2 && k < self.dim && l < self.dim);
        self.entries[Self::index(self.dim, i, j, k, l)]
    }

    /// The N×N outcome block for setting pair `(A_i, B_j)`.
    pub fn block(&self, i: usize, j: usize) -> &[f64] {
        let n2 = self.dim * self.dim;
        let start = (2 * i + j) * n2;
        &self.entries[start..start + n2]
    }

    /// Largest `|Σ block − 1|` over the four blocks.
    pub fn normalization_defect(&self) -> f64 {
        (0..4)
            .map(|b| {
                let s: f64 = self.block(b / 2, b % 2).iter().sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest deviation of any single-observer marginal from `1/N`.
    pub fn marginal_defect(&self) -> f64 {
        let n = self.dim;
        let flat = 1.0 / n as f64;
        let mut worst = 0.0_f64;
        for b in 0..4 {
            let blk = self.block(b / 2, b % 2);
            for k in 0..n {
                let row: f64 = blk[k * n..(k + 1) * n].iter().sum();
                let col: f64 = (0..n).map(|r| blk[r * n + k]).sum();
                worst = worst.max((row - flat).abs()).max((col - flat).abs());
            }
        }
        worst
    }

    /// The same observables measured on the state mixed with noise fraction `noise`.
    pub fn with_noise(&self, noise: f64) -> Result<NoisyTable> {
        NoisyTable::new(self.clone(), noise)
    }
}

/// Joint probabilities on the isotropic mixture `F·𝟙/N² + (1−F)·|Ψ⟩⟨Ψ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyTable {
    base: ProbabilityTable,
    noise_fraction: f64,
}

impl NoisyTable {
    pub fn new(base: ProbabilityTable, noise_fraction: f64) -> Result<Self> {
        check_noise(noise_fraction)?;
        Ok(Self {
            base,
            noise_fraction,
        })
    }

    pub fn base(&self) -> &ProbabilityTable {
        &self.base
    }

    pub fn noise_fraction(&self) -> f64 {
        self.noise_fraction
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        mix(self.noise_fraction, self.base.dim, self.base.get(i, j, k, l))
    }
}

#[inline]
pub(crate) fn mix(noise: f64, dim: usize, pure: f64) -> f64 {
    noise / (dim * dim) as f64 + (1.0 - noise) * pure
}

pub(crate) fn check_noise(noise: f64) -> Result<()> {
    if (0.0..=1.0).contains(&noise) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "noise fraction",
            value: noise,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_rounding_residue() {
        let mut e = vec![0.25; 16];
        e[0] = -5e-15;
        let t = ProbabilityTable::from_entries(2, e).unwrap();
        assert_eq!(t.get(0, 0, 0, 0), 0.0);
    }

    #[test]
    fn rejects_real_negatives_and_bad_lengths() {
        let mut e = vec![0.25; 16];
        e[3] = -1e-6;
        assert!(matches!(
            ProbabilityTable::from_entries(2, e),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            ProbabilityTable::from_entries(2, vec![0.25; 15]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn full_noise_is_uniform() {
        let mut e = vec![0.0; 16];
        for b in 0..4 {
            e[b * 4] = 0.5;
            e[b * 4 + 3] = 0.5;
        }
        let t = ProbabilityTable::from_entries(2, e).unwrap();
        let noisy = t.with_noise(1.0).unwrap();
        for k in 0..2 {
            for l in 0..2 {
                assert_eq!(noisy.get(1, 0, k, l), 0.25);
            }
        }
        assert!(t.with_noise(1.5).is_err());
        assert!(t.with_noise(-0.1).is_err());
    }

    #[test]
    fn uniform_table_invariants() {
        let t = ProbabilityTable::uniform(5).unwrap();
        assert!(t.normalization_defect() < 1e-12);
        assert!(t.marginal_defect() < 1e-12);
    }
}
