use nalgebra::DVector;

use super::gate::check_targets;
use super::{GateMatrix, WireDims};
use crate::error::{Error, Result};
use crate::C64;

pub const NORM_TOL: f64 = 1e-12;

/// Normalized pure state over a mixed-radix register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: WireDims,
    amps: DVector<C64>,
}

impl PureState {
    pub fn new(dims: WireDims, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != dims.total_dim() {
            return Err(Error::LengthMismatch {
                expected: dims.total_dim(),
                got: amps.len(),
            });
        }
        let norm2 = amps.norm_squared();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { dims, amps })
    }

    /// Normalizes `amps` before wrapping them.
    pub fn normalized(dims: WireDims, amps: DVector<C64>) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(dims, amps / C64::new(norm, 0.0))
    }

    pub fn basis(dims: WireDims, digits: &[usize]) -> Result<Self> {
        let index = dims.basis_index(digits)?;
        let mut amps = DVector::zeros(dims.total_dim());
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &WireDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<C64> {
        Ok(self.amps[self.dims.basis_index(digits)?])
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.norm_squared()
    }

    /// Applies `gate` to `wires`, identity on the rest of the register.
    pub fn apply_gate(&self, gate: &GateMatrix, wires: &[usize]) -> Result<Self> {
        check_targets(&self.dims, gate.wire_dims(), wires)?;
        let sub = WireDims::new(gate.wire_dims().to_vec())?;
        let m = gate.matrix();
        let mut out = DVector::zeros(self.amps.len());
        let mut target = vec![0; self.dims.num_wires()];
        for (col, &amp) in self.amps.iter().enumerate() {
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            let digits = self.dims.basis_digits(col)?;
            let sub_in = sub.basis_index(&wires.iter().map(|&w| digits[w]).collect::<Vec<_>>())?;
            target.copy_from_slice(&digits);
            for sub_out in 0..sub.total_dim() {
                let g = m[(sub_out, sub_in)];
                if g == C64::new(0.0, 0.0) {
                    continue;
                }
                for (k, d) in sub.basis_digits(sub_out)?.into_iter().enumerate() {
                    target[wires[k]] = d;
                }
                out[self.dims.basis_index(&target)?] += g * amp;
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            amps: out,
        })
    }

    /// Total probability on basis states where any wire sits at level >= 2.
    pub fn leakage(&self) -> f64 {
        let qubit = self.dims.qubit_subspace();
        let kept: f64 = qubit.iter().map(|&i| self.amps[i].norm_sqr()).sum();
        (self.norm_squared() - kept).max(0.0)
    }
}
