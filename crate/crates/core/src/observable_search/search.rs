//! Restarted simplex searches over the three observable families.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::amoeba::{nelder_mead, AmoebaConfig};
use crate::error::{Error, Result};
use crate::lhv_solver::{
    critical_noise_fraction, noise_threshold_value, LpReduction, ThresholdOptions, CERTIFICATE_TOL,
};
use crate::quantum_model::{
    probability_table_general, probability_table_multiport, probability_table_sg_spin1,
    unitary_from_params, ObservableParams, PhaseSettings, ProbabilityTable, SgDirections,
};

/// Lower bound on the noise variable while searching. Settings that admit a
/// local model still get a graded (negative) value instead of a flat zero.
pub const SEARCH_FLOOR: f64 = -1.0;

/// Measurement settings found by a search.
#[derive(Debug, Clone, PartialEq)]
pub enum BestSettings {
    Multiport(PhaseSettings),
    /// `A_1, A_2, B_1, B_2`.
    General(Box<[ObservableParams; 4]>),
    SternGerlach(SgDirections),
}

impl BestSettings {
    pub fn table(&self) -> Result<ProbabilityTable> {
        match self {
            Self::Multiport(s) => Ok(probability_table_multiport(s)),
            Self::General(p) => general_table(p),
            Self::SternGerlach(d) => Ok(probability_table_sg_spin1(d)),
        }
    }

    /// Inverse of [`flatten`](Self::flatten) for multiport settings (`4N` phases).
    pub fn multiport_from_flat(dim: usize, flat: &[f64]) -> Result<Self> {
        Ok(Self::Multiport(PhaseSettings::from_flat(dim, flat)?))
    }

    /// Inverse of [`flatten`](Self::flatten) for general unitaries (`4(N²−1)` angles).
    pub fn general_from_flat(dim: usize, flat: &[f64]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let expected = 4 * ObservableParams::param_count(dim);
        if flat.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: flat.len(),
            });
        }
        Ok(Self::General(Box::new(split_general(dim, flat)?)))
    }

    /// Inverse of [`flatten`](Self::flatten) for Stern-Gerlach axes (8 angles).
    pub fn stern_gerlach_from_flat(flat: &[f64]) -> Result<Self> {
        Ok(Self::SternGerlach(SgDirections::from_params(flat)?))
    }

    /// Flattened angles as stored in result records.
    pub fn flatten(&self) -> Vec<f64> {
        match self {
            Self::Multiport(s) => s.flatten(),
            Self::General(p) => p.iter().flat_map(|o| o.params().to_vec()).collect(),
            Self::SternGerlach(d) => d.to_params(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_settings: BestSettings,
    /// Certified threshold at `best_settings`; the maximum of `restart_bests`.
    pub best_f: f64,
    /// Marginal residual of the certifying hidden model at `best_settings`.
    pub certificate_residual: f64,
    /// Objective evaluations across all restarts.
    pub evaluations: usize,
    /// Linear programs solved, including certification.
    pub lp_solves: usize,
    /// Certified threshold reached by each restart, in restart order.
    pub restart_bests: Vec<f64>,
    pub seed: u64,
}

/// Random stream for one restart: ChaCha8 keyed by `seed`, stream `restart`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn uniform_angles(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.random::<f64>() * TAU).collect()
}

fn general_table(blocks: &[ObservableParams; 4]) -> Result<ProbabilityTable> {
    let [a1, a2, b1, b2] = blocks.each_ref().map(unitary_from_params);
    probability_table_general(&a1, &a2, &b1, &b2)
}

fn split_general(dim: usize, x: &[f64]) -> Result<[ObservableParams; 4]> {
    let len = ObservableParams::param_count(dim);
    let block = |b: usize| ObservableParams::new(dim, x[b * len..(b + 1) * len].to_vec());
    Ok([block(0)?, block(1)?, block(2)?, block(3)?])
}

/// One observable family: how to decode a search point and evaluate it.
struct Family<D, O> {
    params: usize,
    decode: D,
    objective: O,
}

fn run_search<D, O>(family: Family<D, O>, cfg: &AmoebaConfig) -> Result<SearchResult>
where
    D: Fn(&[f64]) -> Result<BestSettings>,
    O: Fn(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    let mut evaluations = 0;
    let mut lp_solves = 0;
    let mut restart_bests = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(BestSettings, f64, f64)> = None;

    for restart in 0..cfg.restarts {
        let mut rng = restart_rng(cfg.seed, restart);
        let x0 = uniform_angles(&mut rng, family.params);
        let mut outcome = nelder_mead(&family.objective, &x0, cfg)?;
        let mut spent = outcome.evaluations;
        // basin hopping: kick the best point and rerun until the budget is gone
        while cfg.hop_kick > 0.0 && spent < cfg.max_evals {
            let kicked: Vec<f64> = outcome
                .x_best
                .iter()
                .map(|x| x + cfg.hop_kick * (2.0 * rng.random::<f64>() - 1.0))
                .collect();
            let budget = AmoebaConfig {
                max_evals: cfg.max_evals - spent,
                ..*cfg
            };
            let hop = nelder_mead(&family.objective, &kicked, &budget)?;
            spent += hop.evaluations;
            if hop.f_best > outcome.f_best {
                outcome = hop;
            }
        }
        evaluations += spent;
        lp_solves += spent + 1;

        let settings = (family.decode)(&outcome.x_best)?;
        let certified = critical_noise_fraction(&settings.table()?)?;
        if certified.residual >= CERTIFICATE_TOL {
            return Err(Error::SolverNumerics {
                residual: certified.residual,
            });
        }
        restart_bests.push(certified.f_min);
        // strict comparison keeps the earliest restart on ties
        if best.as_ref().is_none_or(|(_, f, _)| certified.f_min > *f) {
            best = Some((settings, certified.f_min, certified.residual));
        }
    }

    let (best_settings, best_f, certificate_residual) = best.expect("at least one restart");
    Ok(SearchResult {
        best_settings,
        best_f,
        certificate_residual,
        evaluations,
        lp_solves,
        restart_bests,
        seed: cfg.seed,
    })
}

/// Maximize the threshold over gauge-fixed phase settings of Bell multiports
/// (`4(N−1)` search dimensions).
pub fn optimize_multiport(dim: usize, cfg: &AmoebaConfig) -> Result<SearchResult> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let options = ThresholdOptions {
        reduction: LpReduction::ShiftSymmetric,
        floor: SEARCH_FLOOR,
    };
    run_search(
        Family {
            params: PhaseSettings::gauge_param_count(dim),
            decode: |x: &[f64]| Ok(BestSettings::Multiport(PhaseSettings::from_gauge_params(dim, x)?)),
            objective: |x: &[f64]| {
                let settings = PhaseSettings::from_gauge_params(dim, x)?;
                noise_threshold_value(&probability_table_multiport(&settings), &options)
            },
        },
        cfg,
    )
}

/// Maximize over arbitrary local unitaries (`4(N²−1)` search dimensions).
pub fn optimize_general(dim: usize, cfg: &AmoebaConfig) -> Result<SearchResult> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let options = ThresholdOptions {
        reduction: LpReduction::Full,
        floor: SEARCH_FLOOR,
    };
    run_search(
        Family {
            params: 4 * ObservableParams::param_count(dim),
            decode: |x: &[f64]| Ok(BestSettings::General(Box::new(split_general(dim, x)?))),
            objective: |x: &[f64]| {
                let table = general_table(&split_general(dim, x)?)?;
                noise_threshold_value(&table, &options)
            },
        },
        cfg,
    )
}

/// Maximize over Stern-Gerlach axes for two spin-1 particles in the singlet.
pub fn optimize_sg_spin1(cfg: &AmoebaConfig) -> Result<SearchResult> {
    let options = ThresholdOptions {
        reduction: LpReduction::Full,
        floor: SEARCH_FLOOR,
    };
    run_search(
        Family {
            params: SgDirections::PARAM_COUNT,
            decode: |x: &[f64]| Ok(BestSettings::SternGerlach(SgDirections::from_params(x)?)),
            objective: |x: &[f64]| {
                let table = probability_table_sg_spin1(&SgDirections::from_params(x)?);
                noise_threshold_value(&table, &options)
            },
        },
        cfg,
    )
}
