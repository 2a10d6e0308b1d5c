//! Square unitary matrices: the Bell multiport and a triangular chart of
//! two-mode rotations covering all of SU(N) up to a global phase.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense N×N complex matrix, row-major. Constructed only through routines
/// that produce unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { dim, entries })
    }

    /// Diagonal matrix of phase factors `exp(i·phase_m)`.
    pub fn diagonal_phases(phases: &[f64]) -> Result<Self> {
        let dim = phases.len();
        let mut u = Self::identity(dim)?;
        for (m, &p) in phases.iter().enumerate() {
            u.entries[m * dim + m] = Complex64::from_polar(1.0, p);
        }
        Ok(u)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 0-based `(row, col)`.
    #[inline]
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                for j in 0..n {
                    entries[i * n + j] += a * rhs.entries[k * n + j];
                }
            }
        }
        Ok(UnitaryMatrix { dim: n, entries })
    }

    /// Largest elementwise deviation of `U·U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.at(i, k) * self.at(j, k).conj();
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    /// Rotate modes `p < q` in place from the right: `self ← self · T(p,q)`.
    fn apply_two_mode_right(&mut self, p: usize, q: usize, theta: f64, phi: f64) {
        let (s, c) = theta.sin_cos();
        let e = Complex64::from_polar(1.0, phi);
        // T restricted to (p,q): [[e·c, −s], [e·s, c]]
        let (t_pp, t_pq, t_qp, t_qq) = (e * c, Complex64::new(-s, 0.0), e * s, Complex64::new(c, 0.0));
        let n = self.dim;
        for row in 0..n {
            let a = self.entries[row * n + p];
            let b = self.entries[row * n + q];
            self.entries[row * n + p] = a * t_pp + b * t_qp;
            self.entries[row * n + q] = a * t_pq + b * t_qq;
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::InvalidDimension(dim))
    } else {
        Ok(())
    }
}

/// The N-port Bell multiport: `U[j][i] = γ^{j·i} / √N` with `γ = exp(2πi/N)`
/// (0-based indices, so the exponent matches the 1-based `(j−1)(i−1)`).
pub fn bell_multiport(dim: usize) -> Result<UnitaryMatrix> {
    check_dim(dim)?;
    let norm = 1.0 / (dim as f64).sqrt();
    let mut entries = Vec::with_capacity(dim * dim);
    for j in 0..dim {
        for i in 0..dim {
            // reduce the exponent first so large N keeps full phase accuracy
            let power = (j * i) % dim;
            entries.push(Complex64::from_polar(norm, TAU * power as f64 / dim as f64));
        }
    }
    Ok(UnitaryMatrix { dim, entries })
}

/// Real parameters of one general nondegenerate observable.
///
/// Layout: `N(N−1)/2` pairs `(θ, φ)` for the two-mode rotations in the order
/// `(0,1), (0,2), …, (0,N−1), (1,2), …`, followed by `N−1` diagonal phases
/// (the last mode carries none). Total `N²−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableParams {
    dim: usize,
    params: Vec<f64>,
}

impl ObservableParams {
    pub fn new(dim: usize, params: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        let expected = Self::param_count(dim);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: params.len(),
            });
        }
        if let Some(&bad) = params.iter().find(|p| !p.is_finite()) {
            return Err(Error::Domain {
                what: "observable parameter",
                value: bad,
            });
        }
        Ok(Self { dim, params })
    }

    pub fn param_count(dim: usize) -> usize {
        dim * dim - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

/// Unitary `D · T(0,1) · T(0,2) ⋯ T(N−2,N−1)` built from `p`.
pub fn unitary_from_params(p: &ObservableParams) -> UnitaryMatrix {
    let n = p.dim;
    let mut u = UnitaryMatrix::identity(n).expect("dimension checked on construction");
    let mut it = p.params.iter().copied();
    for a in 0..n {
        for b in (a + 1)..n {
            let theta = it.next().unwrap();
            let phi = it.next().unwrap();
            u.apply_two_mode_right(a, b, theta, phi);
        }
    }
    // left-multiplication by the diagonal scales rows
    for row in 0..n - 1 {
        let d = Complex64::from_polar(1.0, it.next().unwrap());
        for col in 0..n {
            u.entries[row * n + col] *= d;
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn multiport_two_is_hadamard() {
        let u = bell_multiport(2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!(close(u.at(0, 0), Complex64::new(h, 0.0)));
        assert!(close(u.at(0, 1), Complex64::new(h, 0.0)));
        assert!(close(u.at(1, 0), Complex64::new(h, 0.0)));
        assert!(close(u.at(1, 1), Complex64::new(-h, 0.0)));
    }

    #[test]
    fn multiport_three_entry() {
        // 1-based (2,3) is 0-based (1,2)
        let u = bell_multiport(3).unwrap();
        let want = Complex64::from_polar(1.0 / 3f64.sqrt(), 4.0 * PI / 3.0);
        assert!(close(u.at(1, 2), want));
    }

    #[test]
    fn multiport_columns_orthogonal() {
        let u = bell_multiport(4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let ip: Complex64 = (0..4).map(|r| u.at(r, a).conj() * u.at(r, b)).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn multiport_flat_moduli_and_unitary() {
        for n in 2..=12 {
            let u = bell_multiport(n).unwrap();
            assert!(u.unitarity_defect() < 1e-12, "N={n}");
            let m = 1.0 / (n as f64).sqrt();
            assert!(u.entries().iter().all(|z| (z.norm() - m).abs() < 1e-12));
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert_eq!(bell_multiport(1), Err(Error::InvalidDimension(1)));
        assert_eq!(bell_multiport(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn zero_params_give_identity() {
        for n in 2..=5 {
            let p = ObservableParams::new(n, vec![0.0; n * n - 1]).unwrap();
            assert_eq!(unitary_from_params(&p), UnitaryMatrix::identity(n).unwrap());
        }
    }

    #[test]
    fn single_rotation_is_real_givens() {
        let p = ObservableParams::new(2, vec![FRAC_PI_4, 0.0, 0.0]).unwrap();
        let u = unitary_from_params(&p);
        let (s, c) = FRAC_PI_4.sin_cos();
        assert!(close(u.at(0, 0), Complex64::new(c, 0.0)));
        assert!(close(u.at(0, 1), Complex64::new(-s, 0.0)));
        assert!(close(u.at(1, 0), Complex64::new(s, 0.0)));
        assert!(close(u.at(1, 1), Complex64::new(c, 0.0)));
    }

    #[test]
    fn wrong_param_count() {
        assert_eq!(
            ObservableParams::new(3, vec![0.0; 7]),
            Err(Error::DimensionMismatch {
                expected: 8,
                actual: 7
            })
        );
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let a = UnitaryMatrix::identity(2).unwrap();
        let b = UnitaryMatrix::identity(3).unwrap();
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
    }
}
