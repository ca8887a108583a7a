//! Qudit-assisted Toffoli gates.
//!
//! A Toffoli-sign gate on `n` control qubits needs only `2n-1` two-wire gates
//! when the target may temporarily use `n+1` levels. This crate builds those
//! circuits on a mixed-radix state-vector engine ([`qudit`], [`toffoli`]) and
//! simulates their optical realizations on a bosonic Fock-space engine
//! ([`fock`], [`optical`]). The deterministic realization uses cross-Kerr
//! interactions; the others herald or post-select on photon counts.

pub mod error;
pub mod fock;
pub mod optical;
pub mod qudit;
pub mod random;
pub mod toffoli;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
