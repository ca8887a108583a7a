//! Mixed-radix pure-state engine.

mod circuit;
mod dims;
mod gate;
mod state;
pub mod text;

pub use circuit::{circuit_unitary, qubit_block, CircuitDescription, Step};
pub use dims::WireDims;
pub use gate::{
    equiv_up_to_global_phase, max_abs_diff, unitarity_error, GateMatrix, PhaseEquivalence,
    UNITARY_TOL,
};
pub use state::{PureState, NORM_TOL};
