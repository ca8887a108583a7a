//! Post-selected controlled sign from one-third beamsplitters, and the
//! heralded circuit rebuilt with two of them.

use super::heralded::{P3_H, P3_V, P4_H, P4_V};
use super::GateRealization;
use crate::error::Result;
use crate::fock::{DottedSide, LogicalLayout, OpticalCircuit, OpticalElement};

/// Appends a post-selected C-S between dual-rail qubits `control` and
/// `target`, each given as `(H, V)` modes.
///
/// The V modes meet on a 1/3 beamsplitter and both H modes lose 2/3 to fresh
/// ancillas so every coincidence amplitude has magnitude 1/3. Modes in
/// `balance` hold the target photon in alternatives where it bypasses the
/// gate; they are attenuated by the same amount. `next_ancilla` is advanced
/// past the ancillas used.
///
/// Under the real beamsplitter convention the doubly occupied term picks up
/// `+1/3`, so signs are chosen to make the other three `-1/3`: the gate is
/// `-(1/3) diag(1, 1, 1, -1)`.
pub fn push_postselected_cs(
    circuit: &mut OpticalCircuit,
    control: (usize, usize),
    target: (usize, usize),
    balance: &[usize],
    next_ancilla: &mut usize,
) -> Result<()> {
    let third = 1.0 / 3.0;
    circuit.push(OpticalElement::BeamSplitter {
        modes: (control.1, target.1),
        reflectivity: third,
        dotted: DottedSide::Second,
    })?;
    let mut attenuate = |mode: usize, dotted: DottedSide| -> Result<()> {
        let ancilla = *next_ancilla;
        *next_ancilla += 1;
        circuit.push(OpticalElement::Attenuator {
            mode,
            ancilla,
            transmission: third,
            dotted,
        })
    };
    attenuate(control.0, DottedSide::Second)?;
    attenuate(target.0, DottedSide::First)?;
    for &m in balance {
        attenuate(m, DottedSide::First)?;
    }
    Ok(())
}

/// Two dual-rail qubits on modes 0..4 with ancillas 4 and 5.
pub fn postselected_cs_gate() -> GateRealization {
    let mut circuit = OpticalCircuit::new(6);
    let mut next = 4;
    push_postselected_cs(&mut circuit, (0, 1), (2, 3), &[], &mut next)
        .expect("modes are in range");
    let layout = LogicalLayout::new(6, vec![vec![0, 1], vec![2, 3]]).expect("disjoint groups");
    GateRealization {
        name: "post-selected C-S".into(),
        circuit,
        input_layout: layout.clone(),
        output_layout: layout,
        condition: "one photon per qubit, ancillas empty".into(),
    }
}

/// The heralded setup with each C-S replaced by the post-selected one.
/// Path-4 H bypasses both gates and is balanced twice; six ancillas.
pub fn naive_chain_gate() -> GateRealization {
    let mut circuit = OpticalCircuit::new(14);
    let mut next = 8;
    let pbs = OpticalElement::PolarizingBeamSplitter {
        path_a: (P3_H, P3_V),
        path_b: (P4_H, P4_V),
    };
    let h3 = OpticalElement::hwp_degrees(P3_H, P3_V, 22.5);
    let build = |c: &mut OpticalCircuit, next: &mut usize| -> Result<()> {
        c.push(pbs.clone())?;
        c.push(h3.clone())?;
        push_postselected_cs(c, (2, 3), (P3_H, P3_V), &[P4_H], next)?;
        c.push(h3.clone())?;
        push_postselected_cs(c, (0, 1), (P3_H, P3_V), &[P4_H], next)?;
        c.push(h3.clone())?;
        c.push(OpticalElement::hwp_degrees(P4_H, P4_V, 22.5))?;
        c.push(pbs.clone())
    };
    build(&mut circuit, &mut next).expect("modes are in range");
    let layout =
        LogicalLayout::new(14, vec![vec![0, 1], vec![2, 3], vec![P4_H, P4_V]]).expect("disjoint");
    GateRealization {
        name: "naive post-selected chain".into(),
        circuit,
        input_layout: layout.clone(),
        output_layout: layout,
        condition: "one photon per qubit, path 3 and ancillas empty".into(),
    }
}
