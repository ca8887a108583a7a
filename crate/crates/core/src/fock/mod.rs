//! Bosonic Fock-space simulation at fixed photon number.
//!
//! Mode matrices follow `U[out, in]`: a photon entering mode `j` leaves in
//! mode `i` with amplitude `U[i, j]`.

mod basis;
mod circuit;
mod element;
mod layout;
mod lift;
mod permanent;
mod state;
pub mod text;

pub use basis::{binomial, FockBasis, Occupation};
pub use circuit::OpticalCircuit;
pub use element::{single_photon_transfer, DottedSide, OpticalElement};
pub use layout::{Decoded, LogicalLayout};
pub use lift::{evolve_occupation, lift_to_fock};
pub use permanent::{permanent, permanent_amplitude_oracle};
pub use state::{
    exhaustive_partition, DetectionPattern, ModeCondition, OpticalState, PostselectOutcome,
    NULL_PROBABILITY,
};
