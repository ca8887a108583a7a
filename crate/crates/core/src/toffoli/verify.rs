use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{
    circuit_unitary, equiv_up_to_global_phase, qubit_block, CircuitDescription, GateMatrix,
    PureState, WireDims,
};
use crate::C64;

/// Diagonal +-1 operator over `n + 1` qubits with a single -1 at `component`.
pub fn oracle_n_toffoli_sign(n: usize, component: usize) -> Result<GateMatrix> {
    let size = 1usize << (n + 1);
    if component >= size {
        return Err(Error::IndexOutOfRange {
            index: component,
            total: size,
        });
    }
    let mut diag = vec![C64::new(1.0, 0.0); size];
    diag[component] = C64::new(-1.0, 0.0);
    GateMatrix::diagonal(vec![2; n + 1], &diag)
}

/// Truth-table Toffoli on `n` controls and one target (the last wire):
/// the target bit flips iff every control bit is 1.
pub fn oracle_n_toffoli(n: usize) -> GateMatrix {
    let size = 1usize << (n + 1);
    let perm: Vec<usize> = (0..size)
        .map(|x| {
            let controls = x >> 1;
            if controls == (1 << n) - 1 {
                x ^ 1
            } else {
                x
            }
        })
        .collect();
    GateMatrix::permutation(vec![2; n + 1], &perm).expect("permutation is unitary")
}

/// `X^mask * M * X^mask` on a qubit register, `mask` bit `k` flipping qubit
/// `num_qubits - 1 - k` (big-endian, matching basis indices).
pub fn conjugate_by_bit_flips(matrix: &DMatrix<C64>, mask: usize) -> DMatrix<C64> {
    DMatrix::from_fn(matrix.nrows(), matrix.ncols(), |i, j| matrix[(i ^ mask, j ^ mask)])
}

/// Outcome of checking a qudit circuit against a Toffoli-sign oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub two_qudit_gate_count: usize,
    pub single_qudit_gate_count: usize,
    pub max_level_used: usize,
    /// `|Tr(O^dagger U)|^2 / d^2` with `U` restricted to the qubit subspace.
    pub fidelity_to_oracle: f64,
    /// Max entrywise deviation from the oracle after removing a global phase.
    pub max_deviation: f64,
    /// Largest probability leaked into target levels >= 2 over qubit basis inputs.
    pub max_leakage: f64,
    pub oracle_component: usize,
    /// Components where the circuit's qubit block has a negative diagonal.
    pub flipped_components: Vec<usize>,
    /// Bit-flip mask `m` with `U = X^m O X^m`, if one exists.
    pub bit_flip_mask: Option<usize>,
    pub reference_counts: BTreeMap<String, usize>,
}

impl DecompositionReport {
    pub fn expected_two_qudit_count(&self) -> usize {
        2 * self.n - 1
    }

    pub fn passed(&self, tol: f64) -> bool {
        (1.0 - self.fidelity_to_oracle).abs() <= tol
            && self.max_deviation <= tol
            && self.max_leakage <= tol
            && self.two_qudit_gate_count == self.expected_two_qudit_count()
    }
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.n + 1;
        writeln!(f, "n-Toffoli-sign decomposition, n = {}", self.n)?;
        writeln!(
            f,
            "  two-qudit gates     {} (2n-1 = {})",
            self.two_qudit_gate_count,
            self.expected_two_qudit_count()
        )?;
        writeln!(f, "  single-qudit gates  {}", self.single_qudit_gate_count)?;
        writeln!(f, "  max level used      {}", self.max_level_used)?;
        writeln!(
            f,
            "  oracle component    |{:0width$b}>",
            self.oracle_component
        )?;
        let flipped: Vec<String> = self
            .flipped_components
            .iter()
            .map(|c| format!("|{c:0width$b}>"))
            .collect();
        writeln!(f, "  flipped component   {}", flipped.join(", "))?;
        writeln!(f, "  fidelity            {:.12}", self.fidelity_to_oracle)?;
        writeln!(f, "  max deviation       {:.3e}", self.max_deviation)?;
        writeln!(f, "  max leakage         {:.3e}", self.max_leakage)?;
        match self.bit_flip_mask {
            Some(m) => writeln!(f, "  bit-flip mask       {m:0width$b}")?,
            None => writeln!(f, "  bit-flip mask       none")?,
        }
        for (name, count) in &self.reference_counts {
            writeln!(f, "  reference {name:<24} {count}")?;
        }
        Ok(())
    }
}

/// Published comparison counts for an `n`-control Toffoli.
pub fn reference_counts(n: usize) -> BTreeMap<String, usize> {
    let mut refs = BTreeMap::new();
    refs.insert("qudit_construction".to_string(), 2 * n - 1);
    if n == 2 {
        refs.insert("qubit_only_two_qubit_gates".to_string(), 5);
        refs.insert("qubit_only_cs_gates".to_string(), 6);
    }
    if n == 5 {
        refs.insert("qubit_only_published".to_string(), 64);
    }
    refs
}

/// Compares a Toffoli-sign circuit with `oracle` on the qubit subspace.
///
/// Never fails on a wrong circuit; mismatches show up as fidelity below 1.
pub fn verify_decomposition(
    circ: &CircuitDescription,
    oracle: &GateMatrix,
    n: usize,
) -> Result<DecompositionReport> {
    let dims = circ.dims();
    if dims.num_wires() != n + 1 || dims.dims()[..n].iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch(format!(
            "expected {n} qubit controls and one target, got dims {:?}",
            dims.dims()
        )));
    }
    if oracle.size() != 1 << (n + 1) {
        return Err(Error::DimensionMismatch(format!(
            "oracle has size {} but the qubit subspace has {}",
            oracle.size(),
            1 << (n + 1)
        )));
    }
    let unitary = circuit_unitary(circ)?;
    let block = qubit_block(dims, unitary.matrix());
    let d = block.nrows() as f64;
    let overlap: C64 = oracle
        .matrix()
        .iter()
        .zip(block.iter())
        .map(|(o, u)| o.conj() * u)
        .sum();
    let fidelity = overlap.norm_sqr() / (d * d);
    let equiv = equiv_up_to_global_phase(&block, oracle.matrix(), f64::INFINITY)?;

    let oracle_component = (0..oracle.size())
        .find(|&i| oracle.matrix()[(i, i)].re < 0.0)
        .unwrap_or(0);
    let flipped_components: Vec<usize> = (0..block.nrows())
        .filter(|&i| block[(i, i)].re < -0.5)
        .collect();
    let bit_flip_mask = (0..oracle.size()).find(|&mask| {
        let conj = conjugate_by_bit_flips(oracle.matrix(), mask);
        equiv_up_to_global_phase(&block, &conj, 1e-10)
            .map(|e| e.equivalent)
            .unwrap_or(false)
    });

    Ok(DecompositionReport {
        n,
        two_qudit_gate_count: circ.two_qudit_gate_count(),
        single_qudit_gate_count: circ.single_qudit_gate_count(),
        max_level_used: circ.max_level_used(),
        fidelity_to_oracle: fidelity,
        max_deviation: equiv.residual,
        max_leakage: max_leakage(circ)?,
        oracle_component,
        flipped_components,
        bit_flip_mask,
        reference_counts: reference_counts(n),
    })
}

/// Largest norm left on non-qubit levels over all qubit basis inputs.
pub fn max_leakage(circ: &CircuitDescription) -> Result<f64> {
    let dims: &WireDims = circ.dims();
    let mut worst = 0.0f64;
    for index in dims.qubit_subspace() {
        let digits = dims.basis_digits(index)?;
        let out = circ.simulate(&PureState::basis(dims.clone(), &digits)?)?;
        worst = worst.max(out.leakage());
    }
    Ok(worst)
}

/// Finds a bit-flip mask `m` with `H_t U H_t = X^m Toffoli X^m` up to a
/// global phase, where `U` is the circuit's qubit block.
pub fn toffoli_equivalence_mask(circ: &CircuitDescription, n: usize) -> Result<Option<usize>> {
    let conjugated = super::with_target_hadamards(circ)?;
    let unitary = circuit_unitary(&conjugated)?;
    let block = qubit_block(conjugated.dims(), unitary.matrix());
    let toffoli = oracle_n_toffoli(n);
    for mask in 0..(1usize << (n + 1)) {
        let target = conjugate_by_bit_flips(toffoli.matrix(), mask);
        if equiv_up_to_global_phase(&block, &target, 1e-10)?.equivalent {
            return Ok(Some(mask));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toffoli::{build_n_ts_circuit, build_ts_circuit, flipped_component};

    #[test]
    fn oracle_examples() {
        let o = oracle_n_toffoli_sign(2, 0b101).unwrap();
        for i in 0..8 {
            let v = if i == 5 { -1.0 } else { 1.0 };
            assert_eq!(o.matrix()[(i, i)], C64::new(v, 0.0));
        }
        let sq = o.compose(&o).unwrap();
        assert_eq!(sq.matrix(), &DMatrix::identity(8, 8));
        let o3 = oracle_n_toffoli_sign(3, 0b1111).unwrap();
        assert_eq!(o3.matrix()[(15, 15)], C64::new(-1.0, 0.0));
        assert!(oracle_n_toffoli_sign(2, 8).is_err());
    }

    #[test]
    fn two_control_matches_oracle() {
        let r = verify_decomposition(
            &build_ts_circuit(),
            &oracle_n_toffoli_sign(2, 0b101).unwrap(),
            2,
        )
        .unwrap();
        assert!((r.fidelity_to_oracle - 1.0).abs() < 1e-10);
        assert_eq!(r.two_qudit_gate_count, 3);
        assert_eq!(r.flipped_components, vec![5]);
        assert_eq!(r.bit_flip_mask, Some(0));
        assert!(r.passed(1e-10));
    }

    #[test]
    fn n3_matches_oracle() {
        let r = verify_decomposition(
            &build_n_ts_circuit(3).unwrap(),
            &oracle_n_toffoli_sign(3, 0b1111).unwrap(),
            3,
        )
        .unwrap();
        assert!((r.fidelity_to_oracle - 1.0).abs() < 1e-10);
        assert_eq!(r.two_qudit_gate_count, 5);
    }

    #[test]
    fn other_component_is_locally_equivalent() {
        let r = verify_decomposition(
            &build_ts_circuit(),
            &oracle_n_toffoli_sign(2, 0b111).unwrap(),
            2,
        )
        .unwrap();
        assert!(r.fidelity_to_oracle < 1.0 - 1e-3);
        assert_eq!(r.bit_flip_mask, Some(0b010));
    }

    #[test]
    fn corrupted_circuit_reports_low_fidelity() {
        let corrupted = build_ts_circuit().without_step(1);
        let r = verify_decomposition(&corrupted, &oracle_n_toffoli_sign(2, 0b101).unwrap(), 2)
            .unwrap();
        assert!(r.fidelity_to_oracle < 1.0 - 1e-3);
        assert!(!r.passed(1e-10));
    }

    #[test]
    fn hadamards_turn_ts_into_toffoli() {
        // flip on |1,0,1> means the Toffoli is conditioned on b = 0
        assert_eq!(
            toffoli_equivalence_mask(&build_ts_circuit(), 2).unwrap(),
            Some(0b010)
        );
        assert_eq!(
            toffoli_equivalence_mask(&build_n_ts_circuit(3).unwrap(), 3).unwrap(),
            Some(0)
        );
    }

    #[test]
    fn brute_force_toffoli_truth_table() {
        let t = oracle_n_toffoli(2);
        for x in 0..8usize {
            let (a, b, c) = (x >> 2, (x >> 1) & 1, x & 1);
            let y = (a << 2) | (b << 1) | (c ^ (a & b));
            assert_eq!(t.matrix()[(y, x)], C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn report_mentions_flipped_component() {
        let n = 4;
        let r = verify_decomposition(
            &build_n_ts_circuit(n).unwrap(),
            &oracle_n_toffoli_sign(n, flipped_component(n)).unwrap(),
            n,
        )
        .unwrap();
        let text = r.to_string();
        assert!(text.contains("|11111>"), "{text}");
        let json = serde_json::to_string(&r).unwrap();
        let back: DecompositionReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
