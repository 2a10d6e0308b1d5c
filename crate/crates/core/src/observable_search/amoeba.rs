//! Downhill simplex (Nelder-Mead) maximizer.

use crate::error::{Error, Result};

/// Controls for one simplex run and for the restart loop around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmoebaConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Per-coordinate offset of the initial vertices from the start point.
    pub initial_step: f64,
    /// Objective evaluations allowed per restart.
    pub max_evals: usize,
    /// Stop once `max f − min f` over the vertices falls below this.
    pub spread_tol: f64,
    /// After the spread criterion fires, rebuild the simplex around the best
    /// vertex up to this many times while that still improves the value.
    pub rebuilds: usize,
    /// Half-width of the uniform kick applied to every coordinate of the best
    /// point before each further simplex run within a restart; `0` disables
    /// the extra runs.
    pub hop_kick: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AmoebaConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 3.0,
            max_evals: 20_000,
            spread_tol: 1e-7,
            rebuilds: 10,
            hop_kick: 2.0,
            restarts: 20,
            seed: 0,
        }
    }
}

impl AmoebaConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.reflection > 0.0
            && self.expansion > 1.0
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.initial_step > 0.0
            && self.hop_kick >= 0.0
            && self.restarts >= 1
            && self.max_evals >= 1
            && self.spread_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmoebaOutcome {
    pub x_best: Vec<f64>,
    pub f_best: f64,
    pub evaluations: usize,
    /// True when the spread criterion fired before the evaluation budget ran out.
    pub converged: bool,
}

/// Maximize `objective` starting from the simplex `x0, x0 + step·e_i`.
///
/// Each rebuild restarts from the best vertex so far with a fresh simplex of
/// the initial size; a kink can otherwise collapse the simplex early.
pub fn nelder_mead<F>(mut objective: F, x0: &[f64], cfg: &AmoebaConfig) -> Result<AmoebaOutcome>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    let dim = x0.len();
    let mut evaluations = 0usize;
    // the simplex minimizes the negated objective
    let mut eval = |x: &[f64], count: &mut usize| -> Result<f64> {
        *count += 1;
        let v = objective(x)?;
        if !v.is_finite() {
            return Err(Error::SearchAbort {
                value: v,
                point: x.to_vec(),
            });
        }
        Ok(-v)
    };

    let mut start = x0.to_vec();
    let mut start_value: Option<f64> = None;
    let mut converged = false;
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<f64> = Vec::with_capacity(dim + 1);
    let mut centroid = vec![0.0; dim];

    for _round in 0..=cfg.rebuilds {
        vertices.clear();
        values.clear();
        vertices.push(start.clone());
        for i in 0..dim {
            let mut v = start.clone();
            v[i] += cfg.initial_step;
            vertices.push(v);
        }
        for (idx, v) in vertices.iter().enumerate() {
            let value = match (idx, start_value) {
                (0, Some(known)) => known,
                _ => eval(v, &mut evaluations)?,
            };
            values.push(value);
        }

        converged = false;
        loop {
            let mut order: Vec<usize> = (0..=dim).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let best = order[0];
            let worst = order[dim];
            let second_worst = order[dim.saturating_sub(1)];

            if values[worst] - values[best] < cfg.spread_tol {
                converged = true;
                break;
            }
            if evaluations >= cfg.max_evals {
                break;
            }

            centroid.iter_mut().for_each(|c| *c = 0.0);
            for (idx, v) in vertices.iter().enumerate() {
                if idx != worst {
                    centroid.iter_mut().zip(v).for_each(|(c, x)| *c += x);
                }
            }
            centroid.iter_mut().for_each(|c| *c /= dim as f64);

            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&vertices[worst])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let reflected = along(cfg.reflection);
            let f_reflected = eval(&reflected, &mut evaluations)?;

            if f_reflected < values[best] {
                let expanded = along(cfg.reflection * cfg.expansion);
                let f_expanded = eval(&expanded, &mut evaluations)?;
                if f_expanded < f_reflected {
                    vertices[worst] = expanded;
                    values[worst] = f_expanded;
                } else {
                    vertices[worst] = reflected;
                    values[worst] = f_reflected;
                }
                continue;
            }
            if f_reflected < values[second_worst] {
                vertices[worst] = reflected;
                values[worst] = f_reflected;
                continue;
            }

            let (candidate, f_candidate, threshold) = if f_reflected < values[worst] {
                let outside = along(cfg.reflection * cfg.contraction);
                let f = eval(&outside, &mut evaluations)?;
                (outside, f, f_reflected)
            } else {
                let inside = along(-cfg.contraction);
                let f = eval(&inside, &mut evaluations)?;
                (inside, f, values[worst])
            };
            if f_candidate <= threshold {
                vertices[worst] = candidate;
                values[worst] = f_candidate;
                continue;
            }

            let anchor = vertices[best].clone();
            for idx in 0..=dim {
                if idx == best {
                    continue;
                }
                for (x, a) in vertices[idx].iter_mut().zip(&anchor) {
                    *x = a + cfg.shrink * (*x - a);
                }
                values[idx] = eval(&vertices[idx], &mut evaluations)?;
            }
        }

        let best = (0..=dim)
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .expect("simplex has at least one vertex");
        let improved = start_value.is_none_or(|prev| prev - values[best] >= cfg.spread_tol);
        start = vertices[best].clone();
        start_value = Some(values[best]);
        if !converged || !improved {
            break;
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("simplex has at least one vertex");
    Ok(AmoebaOutcome {
        x_best: vertices[best].clone(),
        f_best: -values[best],
        evaluations,
        converged,
    })
}
