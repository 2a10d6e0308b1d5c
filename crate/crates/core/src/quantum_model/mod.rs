//! Measurement unitaries and quantum joint-probability tables for the
//! maximally entangled two-quNit state (and the spin-1 singlet) under
//! isotropic noise.

mod general;
mod multiport;
mod spin1;
mod table;
mod unitary;

pub use general::probability_table_general;
pub use multiport::{
    canonical_angle, joint_probability_cosine_form, joint_probability_multiport,
    probability_table_multiport, PhaseSettings,
};
pub use spin1::{probability_table_sg_spin1, spin1_rotation, Axis, SgDirections};
pub use table::{NoisyTable, ProbabilityTable, NEGATIVE_RESIDUE};
pub use unitary::{bell_multiport, unitary_from_params, ObservableParams, UnitaryMatrix};
