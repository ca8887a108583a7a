//! Deterministic gates built from cross-Kerr interactions.

use std::f64::consts::PI;

use super::GateRealization;
use crate::fock::{LogicalLayout, OpticalCircuit, OpticalElement};

/// Polarization qubits `a = (aH, aV)` on modes 0, 1 and `b = (bH, bV)` on
/// modes 2, 3, with a Kerr interaction between `aV` and `bV`.
/// At `chi = pi` this is a controlled sign.
pub fn kerr_cs_gate(chi: f64) -> GateRealization {
    let circuit = OpticalCircuit::new(4)
        .with(OpticalElement::CrossKerr {
            modes: (1, 3),
            chi,
        })
        .expect("modes are in range");
    GateRealization {
        name: format!("cross-Kerr C-S (chi = {chi})"),
        circuit,
        input_layout: LogicalLayout::dual_rail(2),
        output_layout: LogicalLayout::dual_rail(2),
        condition: "none (deterministic)".into(),
    }
}

/// Modes of the deterministic and heralded Toffoli-sign setups.
pub mod modes {
    pub const A_H: usize = 0;
    pub const A_V: usize = 1;
    pub const B_H: usize = 2;
    pub const B_V: usize = 3;
    pub const C_H: usize = 4;
    pub const C_V: usize = 5;
    /// The extra spatial path reached through a PBS.
    pub const S_H: usize = 6;
    pub const S_V: usize = 7;
}

/// Toffoli-sign gate with qubits `a`, `b` and a qutrit target `c`.
///
/// The qutrit uses `cH`, `cV` for levels 0, 1 and `sV` for level 2.
/// `XA` is a PBS between paths `c` and `s`, sandwiched by half-wave plates
/// at 45 degrees so the PBS sees level 0 as vertical. CNOT is a Kerr
/// between Hadamards (plates at 22.5 degrees). Three Kerr interactions in all.
pub fn deterministic_ts_gate() -> GateRealization {
    use modes::*;
    let kerr = |a, b| OpticalElement::CrossKerr {
        modes: (a, b),
        chi: PI,
    };
    let xa = [
        OpticalElement::hwp_degrees(C_H, C_V, 45.0),
        OpticalElement::PolarizingBeamSplitter {
            path_a: (C_H, C_V),
            path_b: (S_H, S_V),
        },
        OpticalElement::hwp_degrees(C_H, C_V, 45.0),
    ];
    let cnot = [
        OpticalElement::hwp_degrees(C_H, C_V, 22.5),
        kerr(B_V, C_V),
        OpticalElement::hwp_degrees(C_H, C_V, 22.5),
    ];
    let mut circuit = OpticalCircuit::new(8);
    let sequence = xa
        .iter()
        .chain(&cnot)
        .chain(std::iter::once(&kerr(A_V, C_V)))
        .chain(&cnot)
        .chain(&xa)
        .cloned()
        .collect::<Vec<_>>();
    for e in sequence {
        circuit.push(e).expect("modes are in range");
    }
    let layout = LogicalLayout::new(8, vec![vec![A_H, A_V], vec![B_H, B_V], vec![C_H, C_V, S_V]])
        .expect("groups are disjoint");
    GateRealization {
        name: "deterministic Kerr T-S".into(),
        circuit,
        input_layout: layout.clone(),
        output_layout: layout,
        condition: "none (deterministic)".into(),
    }
}
