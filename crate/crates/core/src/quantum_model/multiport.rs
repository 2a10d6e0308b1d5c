//! Bell multiports preceded by local phase shifters.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::table::{check_noise, mix, ProbabilityTable};
use super::unitary::bell_multiport;
use crate::error::{Error, Result};

/// Reduce an angle into `[0, 2π)`.
pub fn canonical_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid rounds tiny negatives up to exactly 2π
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Local phase shifts for both settings of both observers.
///
/// `phases_a[i][m]` is the shift Alice's setting `i` applies to mode `m`,
/// likewise for Bob. Angles are stored reduced into `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSettings {
    dim: usize,
    phases_a: [Vec<f64>; 2],
    phases_b: [Vec<f64>; 2],
}

impl PhaseSettings {
    pub fn new(dim: usize, phases_a: [Vec<f64>; 2], phases_b: [Vec<f64>; 2]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let mut all = [phases_a, phases_b];
        for v in all.iter_mut().flatten() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            for x in v.iter_mut() {
                if !x.is_finite() {
                    return Err(Error::Domain {
                        what: "phase",
                        value: *x,
                    });
                }
                *x = canonical_angle(*x);
            }
        }
        let [phases_a, phases_b] = all;
        Ok(Self {
            dim,
            phases_a,
            phases_b,
        })
    }

    /// All phases zero.
    pub fn zeros(dim: usize) -> Result<Self> {
        let z = vec![0.0; dim];
        Self::new(dim, [z.clone(), z.clone()], [z.clone(), z])
    }

    /// Number of free parameters once each setting's first phase is pinned to 0.
    pub fn gauge_param_count(dim: usize) -> usize {
        4 * (dim - 1)
    }

    /// Build gauge-fixed settings from `4(N−1)` phases, ordered
    /// `A_1, A_2, B_1, B_2`, each listing modes `1..N`.
    pub fn from_gauge_params(dim: usize, params: &[f64]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let expected = Self::gauge_param_count(dim);
        if params.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: params.len(),
            });
        }
        let setting = |s: usize| {
            let mut v = Vec::with_capacity(dim);
            v.push(0.0);
            v.extend_from_slice(&params[s * (dim - 1)..(s + 1) * (dim - 1)]);
            v
        };
        Self::new(dim, [setting(0), setting(1)], [setting(2), setting(3)])
    }

    /// Inverse of [`from_gauge_params`](Self::from_gauge_params) after
    /// shifting each setting so its first phase is zero.
    pub fn gauge_params(&self) -> Vec<f64> {
        self.settings()
            .flat_map(|v| v[1..].iter().map(move |x| canonical_angle(x - v[0])))
            .collect()
    }

    pub fn gauge_fixed(&self) -> Self {
        Self::from_gauge_params(self.dim, &self.gauge_params()).expect("same shape")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phases_a(&self, setting: usize) -> &[f64] {
        &self.phases_a[setting]
    }

    pub fn phases_b(&self, setting: usize) -> &[f64] {
        &self.phases_b[setting]
    }

    /// `A_1, A_2, B_1, B_2` in order.
    pub fn settings(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.phases_a.iter().chain(self.phases_b.iter())
    }

    /// All `4N` angles, ordered `A_1, A_2, B_1, B_2`.
    pub fn flatten(&self) -> Vec<f64> {
        self.settings().flatten().copied().collect()
    }

    pub fn from_flat(dim: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != 4 * dim {
            return Err(Error::DimensionMismatch {
                expected: 4 * dim,
                actual: flat.len(),
            });
        }
        let s = |i: usize| flat[i * dim..(i + 1) * dim].to_vec();
        Self::new(dim, [s(0), s(1)], [s(2), s(3)])
    }
}

fn check_outcomes(dim: usize, setting_pair: (usize, usize), k: usize, l: usize) -> Result<()> {
    let checks = [
        ("Alice setting", setting_pair.0, 2),
        ("Bob setting", setting_pair.1, 2),
        ("Alice outcome", k, dim),
        ("Bob outcome", l, dim),
    ];
    for (what, index, limit) in checks {
        if index >= limit {
            return Err(Error::IndexOutOfRange { what, index, limit });
        }
    }
    Ok(())
}

/// Probability that Alice's detector `k` and Bob's detector `l` fire
/// (0-based) for setting pair `(A_i, B_j)` at noise fraction `noise`:
///
/// `F/N² + (1−F)/N · |Σ_m e^{i(φ_A^m + φ_B^m)} U_{mk} U_{ml}|²`
pub fn joint_probability_multiport(
    settings: &PhaseSettings,
    setting_pair: (usize, usize),
    k: usize,
    l: usize,
    noise: f64,
) -> Result<f64> {
    let n = settings.dim;
    check_outcomes(n, setting_pair, k, l)?;
    check_noise(noise)?;
    let u = bell_multiport(n)?;
    let (pa, pb) = (settings.phases_a(setting_pair.0), settings.phases_b(setting_pair.1));
    let amp: Complex64 = (0..n)
        .map(|m| Complex64::from_polar(1.0, pa[m] + pb[m]) * u.at(m, k) * u.at(m, l))
        .sum();
    Ok(mix(noise, n, amp.norm_sqr() / n as f64))
}

/// Same probability through the interference form
/// `(1/N³)(N + 2(1−F) Σ_{m>n} cos(Φ^m − Φ^n))`,
/// `Φ^m = φ_A^m + φ_B^m + m(k+l−2)·2π/N` with 1-based `m, k, l`.
pub fn joint_probability_cosine_form(
    settings: &PhaseSettings,
    setting_pair: (usize, usize),
    k: usize,
    l: usize,
    noise: f64,
) -> Result<f64> {
    let n = settings.dim;
    check_outcomes(n, setting_pair, k, l)?;
    check_noise(noise)?;
    let (pa, pb) = (settings.phases_a(setting_pair.0), settings.phases_b(setting_pair.1));
    let big_phi: Vec<f64> = (0..n)
        .map(|m| {
            let shift = ((m + 1) * (k + l)) % n;
            pa[m] + pb[m] + shift as f64 * TAU / n as f64
        })
        .collect();
    let mut interference = 0.0;
    for m in 0..n {
        for q in 0..m {
            interference += (big_phi[m] - big_phi[q]).cos();
        }
    }
    let nf = n as f64;
    Ok((nf + 2.0 * (1.0 - noise) * interference) / (nf * nf * nf))
}

/// All `4N²` pure-state probabilities for the given phase settings.
pub fn probability_table_multiport(settings: &PhaseSettings) -> ProbabilityTable {
    let n = settings.dim;
    let nf = n as f64;
    // U_{mk}U_{ml} = γ^{m(k+l)}/N, so the probability depends on (k+l) mod N only
    let roots: Vec<Complex64> = (0..n)
        .map(|p| Complex64::from_polar(1.0, TAU * p as f64 / nf))
        .collect();
    let mut entries = vec![0.0; 4 * n * n];
    let mut by_sum = vec![0.0; n];
    for i in 0..2 {
        for j in 0..2 {
            let (pa, pb) = (settings.phases_a(i), settings.phases_b(j));
            let shifted: Vec<Complex64> = (0..n)
                .map(|m| Complex64::from_polar(1.0, pa[m] + pb[m]))
                .collect();
            for (t, slot) in by_sum.iter_mut().enumerate() {
                let c: Complex64 = shifted
                    .iter()
                    .enumerate()
                    .map(|(m, z)| z * roots[(m * t) % n])
                    .sum();
                *slot = c.norm_sqr() / (nf * nf * nf);
            }
            for k in 0..n {
                for l in 0..n {
                    entries[ProbabilityTable::index(n, i, j, k, l)] = by_sum[(k + l) % n];
                }
            }
        }
    }
    ProbabilityTable::from_entries(n, entries).expect("multiport probabilities lie in [0,1]")
}
