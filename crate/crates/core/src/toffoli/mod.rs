//! Qudit-assisted Toffoli-sign constructions and their verification.

mod build;
mod gates;
mod verify;

pub use build::{build_n_ts_circuit, build_ts_circuit, flipped_component, with_target_hadamards};
pub use gates::{
    gate_cnot_embedded, gate_cs_embedded, gate_hadamard, gate_level_swap, gate_xa, gate_xb,
    NamedGate,
};
pub use verify::{
    conjugate_by_bit_flips, max_leakage, oracle_n_toffoli, oracle_n_toffoli_sign,
    reference_counts, toffoli_equivalence_mask, verify_decomposition, DecompositionReport,
};
