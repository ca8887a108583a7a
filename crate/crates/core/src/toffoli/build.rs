use super::NamedGate;
use crate::error::{Error, Result};
use crate::qudit::{CircuitDescription, WireDims};

/// Two qubits `a`, `b` (wires 0, 1) and a qutrit target `c` (wire 2):
/// `XA(c) CNOT(b,c) CS(a,c) CNOT(b,c) XA(c)`, flipping the sign of `|1,0,1>`.
pub fn build_ts_circuit() -> CircuitDescription {
    build_n_ts_circuit(2).expect("n = 2 is valid")
}

/// Toffoli-sign circuit with `n` qubit controls (wires `0..n`) and an
/// `n+1`-level target (wire `n`), using `2n-1` two-qudit gates.
///
/// The target's qubit level 1 carries the branch still eligible for the sign
/// flip. `XA` first parks target level 0 in level 2. Each CNOT from controls
/// `n-1, ..., 1` moves the eligible branch between levels 0 and 1, and the
/// branch left behind is parked in the next free level with a level swap
/// (`XB` for the first one). A single CS from control 0 then flips the sign,
/// and the mirrored sequence undoes the parking.
///
/// For `n = 2` this is exactly the two-qubit-plus-qutrit circuit above with
/// the flip on `|1,0,1>`. For `n >= 3` the eligible branch is steered so the
/// flip lands on `|1,...,1>`; when `n` is even this takes one extra
/// single-wire `LEVELSWAP(0,1)` on each side of the CS.
pub fn build_n_ts_circuit(n: usize) -> Result<CircuitDescription> {
    if n < 2 {
        return Err(Error::InvalidGate(format!(
            "an n-Toffoli needs at least 2 controls, got {n}"
        )));
    }
    let target = n;
    let mut dims = vec![2; n];
    dims.push(n + 1);
    let mut forward: Vec<(NamedGate, Vec<usize>)> = vec![(NamedGate::XA, vec![target])];

    let mut live = 1;
    let mut next_free = 3;
    let cnot_controls: Vec<usize> = (1..n).rev().collect();
    for (k, &control) in cnot_controls.iter().enumerate() {
        forward.push((NamedGate::CNOT, vec![control, target]));
        let dead = live;
        live = 1 - live;
        if k + 1 < cnot_controls.len() {
            forward.push((swap_gate(dead, next_free), vec![target]));
            next_free += 1;
        }
    }
    if n >= 3 && live == 0 {
        forward.push((NamedGate::LevelSwap(0, 1), vec![target]));
    }

    let mut circ = CircuitDescription::new(WireDims::new(dims)?);
    for (gate, wires) in &forward {
        circ.push(*gate, wires)?;
    }
    circ.push(NamedGate::CS, &[0, target])?;
    // every forward gate is an involution
    for (gate, wires) in forward.iter().rev() {
        circ.push(*gate, wires)?;
    }
    Ok(circ)
}

fn swap_gate(j: usize, k: usize) -> NamedGate {
    match (j.min(k), j.max(k)) {
        (0, 2) => NamedGate::XA,
        (1, 3) => NamedGate::XB,
        (a, b) => NamedGate::LevelSwap(a, b),
    }
}

/// Qubit-register index of the component whose sign [`build_n_ts_circuit`] flips.
pub fn flipped_component(n: usize) -> usize {
    if n == 2 {
        0b101
    } else {
        (1 << (n + 1)) - 1
    }
}

/// Toffoli-sign circuit with a Hadamard on the target before and after.
pub fn with_target_hadamards(circ: &CircuitDescription) -> Result<CircuitDescription> {
    let target = circ.dims().num_wires() - 1;
    let mut out = CircuitDescription::new(circ.dims().clone());
    out.push(NamedGate::H, &[target])?;
    for step in circ.steps() {
        out.push(step.gate, &step.wires)?;
    }
    out.push(NamedGate::H, &[target])?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{circuit_unitary, qubit_block, PureState};
    use crate::C64;

    #[test]
    fn two_control_sequence() {
        let c = build_ts_circuit();
        let names: Vec<String> = c.steps().iter().map(|s| s.gate.to_string()).collect();
        assert_eq!(names, ["XA", "CNOT", "CS", "CNOT", "XA"]);
        assert_eq!(c.steps()[1].wires, vec![1, 2]);
        assert_eq!(c.steps()[2].wires, vec![0, 2]);
        assert_eq!(c.two_qudit_gate_count(), 3);
        assert_eq!(c.dims().dims(), &[2, 2, 3]);
    }

    #[test]
    fn n3_uses_xa_and_xb() {
        let c = build_n_ts_circuit(3).unwrap();
        let names: Vec<String> = c.steps().iter().map(|s| s.gate.to_string()).collect();
        assert_eq!(
            names,
            ["XA", "CNOT", "XB", "CNOT", "CS", "CNOT", "XB", "CNOT", "XA"]
        );
        assert_eq!(c.two_qudit_gate_count(), 5);
        assert_eq!(c.max_level_used(), 3);
    }

    #[test]
    fn levels_stay_within_target_dimension() {
        for n in 2..=7 {
            let c = build_n_ts_circuit(n).unwrap();
            assert_eq!(c.two_qudit_gate_count(), 2 * n - 1);
            assert!(c.max_level_used() <= n);
        }
        assert!(build_n_ts_circuit(1).is_err());
    }

    #[test]
    fn sign_on_all_ones_for_n3() {
        let c = build_n_ts_circuit(3).unwrap();
        let u = circuit_unitary(&c).unwrap();
        let block = qubit_block(c.dims(), u.matrix());
        for i in 0..16 {
            let expected = if i == 15 { -1.0 } else { 1.0 };
            assert!((block[(i, i)] - C64::new(expected, 0.0)).norm() < 1e-12);
        }
    }

    fn close(a: C64, b: C64) {
        assert!((a - b).norm() < 1e-14, "{a} vs {b}");
    }

    // Term-by-term check of the intermediate state after XA and the first CNOT.
    #[test]
    fn intermediate_after_first_cnot() {
        let c = build_ts_circuit();
        let dims = c.dims().clone();
        let amps: Vec<C64> = (0..8).map(|k| C64::new(1.0 + k as f64, 0.0)).collect();
        let mut full = nalgebra::DVector::zeros(12);
        for (k, &a) in amps.iter().enumerate() {
            let (i, j, l) = (k >> 2, (k >> 1) & 1, k & 1);
            full[dims.basis_index(&[i, j, l]).unwrap()] = a;
        }
        let input = PureState::normalized(dims.clone(), full).unwrap();
        let scale = input.amplitude(&[0, 0, 0]).unwrap() / amps[0];
        let mid = c.prefix(2).simulate(&input).unwrap();
        let alpha = |i: usize, j: usize, k: usize| amps[(i << 2) | (j << 1) | k] * scale;
        for i in 0..2 {
            close(mid.amplitude(&[i, 0, 2]).unwrap(), alpha(i, 0, 0));
            close(mid.amplitude(&[i, 0, 1]).unwrap(), alpha(i, 0, 1));
            close(mid.amplitude(&[i, 1, 2]).unwrap(), alpha(i, 1, 0));
            close(mid.amplitude(&[i, 1, 0]).unwrap(), alpha(i, 1, 1));
            close(mid.amplitude(&[i, 1, 1]).unwrap(), C64::new(0.0, 0.0));
        }
        // after the CS only alpha_{1,0,1} changes sign
        let after_cs = c.prefix(3).simulate(&input).unwrap();
        close(after_cs.amplitude(&[1, 0, 1]).unwrap(), -alpha(1, 0, 1));
        close(after_cs.amplitude(&[0, 0, 1]).unwrap(), alpha(0, 0, 1));
        close(after_cs.amplitude(&[1, 1, 0]).unwrap(), alpha(1, 1, 1));
    }
}
