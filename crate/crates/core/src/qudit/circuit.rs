use nalgebra::DMatrix;

use super::gate::check_targets;
use super::{GateMatrix, PureState, WireDims};
use crate::error::{Error, Result};
use crate::toffoli::NamedGate;
use crate::C64;

/// One gate application in a circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub gate: NamedGate,
    pub wires: Vec<usize>,
}

/// An ordered gate sequence over a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitDescription {
    dims: WireDims,
    steps: Vec<Step>,
}

impl CircuitDescription {
    pub fn new(dims: WireDims) -> Self {
        Self {
            dims,
            steps: Vec::new(),
        }
    }

    pub fn dims(&self) -> &WireDims {
        &self.dims
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Appends a step after checking its targets against the register.
    pub fn push(&mut self, gate: NamedGate, wires: &[usize]) -> Result<()> {
        let wire_dims = wires
            .iter()
            .map(|&w| {
                if w < self.dims.num_wires() {
                    Ok(self.dims.dim(w))
                } else {
                    Err(Error::WireOutOfRange {
                        wire: w,
                        wires: self.dims.num_wires(),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let matrix = gate.matrix(&wire_dims)?;
        check_targets(&self.dims, matrix.wire_dims(), wires)?;
        self.steps.push(Step {
            gate,
            wires: wires.to_vec(),
        });
        Ok(())
    }

    /// Builder form of [`push`](Self::push).
    pub fn with(mut self, gate: NamedGate, wires: &[usize]) -> Result<Self> {
        self.push(gate, wires)?;
        Ok(self)
    }

    /// Circuit made of the first `len` steps.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            dims: self.dims.clone(),
            steps: self.steps[..len.min(self.steps.len())].to_vec(),
        }
    }

    /// Same circuit with step `index` dropped.
    pub fn without_step(&self, index: usize) -> Self {
        let mut steps = self.steps.clone();
        if index < steps.len() {
            steps.remove(index);
        }
        Self {
            dims: self.dims.clone(),
            steps,
        }
    }

    pub fn step_matrix(&self, step: &Step) -> Result<GateMatrix> {
        let wire_dims: Vec<usize> = step.wires.iter().map(|&w| self.dims.dim(w)).collect();
        step.gate.matrix(&wire_dims)
    }

    pub fn two_qudit_gate_count(&self) -> usize {
        self.steps.iter().filter(|s| s.wires.len() == 2).count()
    }

    pub fn single_qudit_gate_count(&self) -> usize {
        self.steps.iter().filter(|s| s.wires.len() == 1).count()
    }

    /// Highest level any wire may be driven to by a level-changing gate.
    pub fn max_level_used(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| s.wires.len() == 1)
            .filter_map(|s| s.gate.max_level())
            .max()
            .unwrap_or(1)
    }

    pub fn simulate(&self, state: &PureState) -> Result<PureState> {
        if state.dims() != &self.dims {
            return Err(Error::DimensionMismatch(format!(
                "state dims {:?} do not match circuit dims {:?}",
                state.dims().dims(),
                self.dims.dims()
            )));
        }
        let mut current = state.clone();
        for step in &self.steps {
            current = current.apply_gate(&self.step_matrix(step)?, &step.wires)?;
        }
        Ok(current)
    }
}

/// Ordered product of the embedded step unitaries over the whole register.
pub fn circuit_unitary(circ: &CircuitDescription) -> Result<GateMatrix> {
    let n = circ.dims().total_dim();
    let mut total = DMatrix::<C64>::identity(n, n);
    for step in circ.steps() {
        let embedded = circ.step_matrix(step)?.embed(circ.dims(), &step.wires)?;
        total = embedded * total;
    }
    GateMatrix::with_tolerance(circ.dims().dims().to_vec(), total, 1e-10)
}

/// Restriction of a register operator to the all-qubit-levels subspace.
pub fn qubit_block(dims: &WireDims, matrix: &DMatrix<C64>) -> DMatrix<C64> {
    let sub = dims.qubit_subspace();
    DMatrix::from_fn(sub.len(), sub.len(), |i, j| matrix[(sub[i], sub[j])])
}
