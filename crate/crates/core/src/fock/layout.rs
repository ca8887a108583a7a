use nalgebra::DVector;

use super::{FockBasis, Occupation, OpticalState};
use crate::error::{Error, Result};
use crate::qudit::{PureState, WireDims};
use crate::C64;

/// Maps logical wires onto groups of optical modes.
///
/// Wire `w` with group `[m0, m1, ..]` is in level `k` when its one photon
/// sits in mode `mk`, so a `d`-level wire needs `d` modes.
/// Modes outside every group are ancillas and must be empty in the logical
/// subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalLayout {
    total_modes: usize,
    groups: Vec<Vec<usize>>,
    dims: WireDims,
}

/// Logical amplitudes read back from an optical state.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub amplitudes: DVector<C64>,
    /// Squared norm outside the logical subspace.
    pub leakage: f64,
}

impl Decoded {
    pub fn require_logical(self, tol: f64) -> Result<DVector<C64>> {
        if self.leakage > tol {
            return Err(Error::Leakage(self.leakage));
        }
        Ok(self.amplitudes)
    }
}

impl LogicalLayout {
    pub fn new(total_modes: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; total_modes];
        for group in &groups {
            for &m in group {
                if m >= total_modes {
                    return Err(Error::ModeOutOfRange {
                        mode: m,
                        modes: total_modes,
                    });
                }
                if seen[m] {
                    return Err(Error::RepeatedMode(group.clone()));
                }
                seen[m] = true;
            }
        }
        let dims = WireDims::new(groups.iter().map(Vec::len).collect())?;
        Ok(Self {
            total_modes,
            groups,
            dims,
        })
    }

    /// `qubits` dual-rail qubits on modes `(0,1), (2,3), ...`.
    pub fn dual_rail(qubits: usize) -> Self {
        let groups = (0..qubits).map(|q| vec![2 * q, 2 * q + 1]).collect();
        Self::new(2 * qubits, groups).expect("dual-rail groups are disjoint")
    }

    pub fn total_modes(&self) -> usize {
        self.total_modes
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn dims(&self) -> &WireDims {
        &self.dims
    }

    pub fn photons(&self) -> usize {
        self.groups.len()
    }

    pub fn basis(&self) -> Result<FockBasis> {
        FockBasis::new(self.total_modes, self.photons())
    }

    pub fn encode(&self, digits: &[usize]) -> Result<Occupation> {
        self.dims.basis_index(digits)?;
        let mut occ = vec![0u8; self.total_modes];
        for (group, &d) in self.groups.iter().zip(digits) {
            occ[group[d]] = 1;
        }
        Ok(occ)
    }

    /// Logical digits of `occupation`, or `None` if it is not one photon
    /// per group with empty ancillas.
    pub fn decode_occupation(&self, occupation: &[u8]) -> Option<Vec<usize>> {
        if occupation.len() != self.total_modes {
            return None;
        }
        let mut digits = Vec::with_capacity(self.groups.len());
        let mut inside = 0usize;
        for group in &self.groups {
            let mut level = None;
            for (k, &m) in group.iter().enumerate() {
                match occupation[m] {
                    0 => {}
                    1 if level.is_none() => level = Some(k),
                    _ => return None,
                }
            }
            digits.push(level?);
            inside += 1;
        }
        let total: usize = occupation.iter().map(|&n| n as usize).sum();
        (total == inside).then_some(digits)
    }

    pub fn encode_state(&self, state: &PureState) -> Result<OpticalState> {
        if state.dims() != &self.dims {
            return Err(Error::DimensionMismatch(format!(
                "state dims {:?} but layout dims {:?}",
                state.dims().dims(),
                self.dims.dims()
            )));
        }
        let basis = self.basis()?;
        let mut amps = DVector::zeros(basis.len());
        for (index, &a) in state.amplitudes().iter().enumerate() {
            let digits = self.dims.basis_digits(index)?;
            amps[basis.require_index(&self.encode(&digits)?)?] = a;
        }
        OpticalState::new(basis, amps)
    }

    pub fn encode_basis(&self, digits: &[usize]) -> Result<OpticalState> {
        OpticalState::from_occupation(&self.encode(digits)?)
    }

    pub fn decode(&self, state: &OpticalState) -> Result<Decoded> {
        if state.basis().modes() != self.total_modes {
            return Err(Error::LengthMismatch {
                expected: self.total_modes,
                got: state.basis().modes(),
            });
        }
        let mut amplitudes = DVector::zeros(self.dims.total_dim());
        let mut leakage = 0.0;
        for (occ, a) in state.basis().states().iter().zip(state.amplitudes().iter()) {
            match self.decode_occupation(occ) {
                Some(digits) => amplitudes[self.dims.basis_index(&digits)?] = *a,
                None => leakage += a.norm_sqr(),
            }
        }
        Ok(Decoded {
            amplitudes,
            leakage,
        })
    }
}
