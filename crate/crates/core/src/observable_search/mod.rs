//! Maximizing the noise threshold over measurement settings.

mod amoeba;
mod search;

pub use amoeba::{nelder_mead, AmoebaConfig, AmoebaOutcome};
pub use search::{
    optimize_general, optimize_multiport, optimize_sg_spin1, restart_rng, BestSettings,
    SearchResult, SEARCH_FLOOR,
};
