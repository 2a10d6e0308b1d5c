//! Critical noise fractions for Bell-type experiments on two entangled
//! N-level systems.
//!
//! For a pair of local measurement settings per observer, the smallest
//! admixture of white noise that makes the quantum predictions admit a
//! local hidden-variable model is the optimum of a linear program
//! ([`lhv_solver`]). [`observable_search`] maximizes that threshold over
//! measurement settings with a restarted downhill-simplex search.

pub mod cli;
pub mod error;
pub mod lhv_solver;
pub mod observable_search;
pub mod quantum_model;

pub use error::{Error, Result};
