//! Stern-Gerlach measurements on two spin-1 particles in the singlet state.
//!
//! Outcomes are indexed 0, 1, 2 for spin projections +1, 0, −1 along the
//! apparatus axis.

use std::f64::consts::{PI, SQRT_2, TAU};

use num_complex::Complex64;

use super::multiport::canonical_angle;
use super::table::ProbabilityTable;
use crate::error::{Error, Result};

/// Orientation of one Stern-Gerlach axis in polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    /// Polar angle in `[0, π]`.
    pub theta: f64,
    /// Azimuth in `[0, 2π)`.
    pub phi: f64,
}

impl Axis {
    /// Canonicalize arbitrary angles to the same physical direction.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        for value in [theta, phi] {
            if !value.is_finite() {
                return Err(Error::Domain { what: "axis angle", value });
            }
        }
        let mut t = canonical_angle(theta);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        Ok(Self {
            theta: t,
            phi: canonical_angle(p),
        })
    }

    pub fn z() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn from_unit_vector(v: [f64; 3]) -> Result<Self> {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        Self::new((v[2] / r).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
    }
}

/// Two axes per observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgDirections {
    pub dir_a: [Axis; 2],
    pub dir_b: [Axis; 2],
}

impl SgDirections {
    pub const PARAM_COUNT: usize = 8;

    /// From `(θ, φ)` pairs ordered `A_1, A_2, B_1, B_2`.
    pub fn from_params(params: &[f64]) -> Result<Self> {
        if params.len() != Self::PARAM_COUNT {
            return Err(Error::DimensionMismatch {
                expected: Self::PARAM_COUNT,
                actual: params.len(),
            });
        }
        let ax = |s: usize| Axis::new(params[2 * s], params[2 * s + 1]);
        Ok(Self {
            dir_a: [ax(0)?, ax(1)?],
            dir_b: [ax(2)?, ax(3)?],
        })
    }

    pub fn to_params(&self) -> Vec<f64> {
        self.dir_a
            .iter()
            .chain(self.dir_b.iter())
            .flat_map(|a| [a.theta, a.phi])
            .collect()
    }
}

/// Columns are the eigenvectors of `n·S` for `n = (θ, φ)`:
/// `R = exp(−iφS_z)·exp(−iθS_y)`, entry `[m'][m] = e^{−i m' φ} d¹_{m'm}(θ)`.
pub fn spin1_rotation(axis: Axis) -> [[Complex64; 3]; 3] {
    let (s, c) = axis.theta.sin_cos();
    let h = s / SQRT_2;
    let d = [
        [(1.0 + c) / 2.0, -h, (1.0 - c) / 2.0],
        [h, c, -h],
        [(1.0 - c) / 2.0, h, (1.0 + c) / 2.0],
    ];
    let mut r = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (row, d_row) in d.iter().enumerate() {
        let m_prime = 1.0 - row as f64;
        let phase = Complex64::from_polar(1.0, -m_prime * axis.phi);
        for col in 0..3 {
            r[row][col] = phase * d_row[col];
        }
    }
    r
}

/// `|⟨k_A| ⊗ ⟨l_B| singlet⟩|²` where `singlet = (1/√3) Σ_m (−1)^{1−m} |m⟩|−m⟩`.
pub fn probability_table_sg_spin1(dirs: &SgDirections) -> ProbabilityTable {
    // singlet coefficient for index idx (m = 1 − idx): (−1)^{1−m} = (−1)^idx
    let coeff = |idx: usize| if idx % 2 == 0 { 1.0 } else { -1.0 } / 3f64.sqrt();
    let mut entries = vec![0.0; 36];
    for (i, axis_a) in dir_iter(&dirs.dir_a) {
        let ra = spin1_rotation(axis_a);
        for (j, axis_b) in dir_iter(&dirs.dir_b) {
            let rb = spin1_rotation(axis_b);
            for k in 0..3 {
                for l in 0..3 {
                    // ⟨k_n| = Σ conj(R[m][k]) ⟨m|, the partner of m is index 2 − m
                    let amp: Complex64 = (0..3)
                        .map(|m| coeff(m) * ra[m][k].conj() * rb[2 - m][l].conj())
                        .sum();
                    entries[ProbabilityTable::index(3, i, j, k, l)] = amp.norm_sqr();
                }
            }
        }
    }
    ProbabilityTable::from_entries(3, entries).expect("singlet probabilities lie in [0,1]")
}

fn dir_iter(axes: &[Axis; 2]) -> impl Iterator<Item = (usize, Axis)> + '_ {
    axes.iter().copied().enumerate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_columns_are_axis_eigenvectors() {
        let axis = Axis::new(0.7, 2.1).unwrap();
        let r = spin1_rotation(axis);
        let [nx, ny, nz] = axis.unit_vector();
        // n·S in the |+1>,|0>,|−1> basis
        let a = Complex64::new(nx, -ny) / SQRT_2;
        let ns = [
            [Complex64::new(nz, 0.0), a, Complex64::new(0.0, 0.0)],
            [a.conj(), Complex64::new(0.0, 0.0), a],
            [Complex64::new(0.0, 0.0), a.conj(), Complex64::new(-nz, 0.0)],
        ];
        for col in 0..3 {
            let m = 1.0 - col as f64;
            for row in 0..3 {
                let lhs: Complex64 = (0..3).map(|q| ns[row][q] * r[q][col]).sum();
                assert!((lhs - r[row][col] * m).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn z_axes_anticorrelate() {
        let z = Axis::z();
        let t = probability_table_sg_spin1(&SgDirections {
            dir_a: [z, z],
            dir_b: [z, z],
        });
        for b in 0..4 {
            for k in 0..3 {
                for l in 0..3 {
                    let want = if k + l == 2 { 1.0 / 3.0 } else { 0.0 };
                    assert!((t.get(b / 2, b % 2, k, l) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn axis_canonicalization() {
        let a = Axis::new(-0.5, 0.0).unwrap();
        assert!((a.theta - 0.5).abs() < 1e-15);
        assert!((a.phi - PI).abs() < 1e-15);
        let v = Axis::new(4.0, 1.0).unwrap();
        let w = Axis::from_unit_vector(v.unit_vector()).unwrap();
        assert!((v.theta - w.theta).abs() < 1e-12 && (v.phi - w.phi).abs() < 1e-12);
        assert!(Axis::new(f64::INFINITY, 0.0).is_err());
    }
}
