use nalgebra::DMatrix;

use super::{lift_to_fock, single_photon_transfer, FockBasis, OpticalElement, OpticalState};
use crate::error::{Error, Result};
use crate::C64;

/// An ordered list of elements acting on a fixed set of modes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OpticalCircuit {
    modes: usize,
    elements: Vec<OpticalElement>,
}

impl OpticalCircuit {
    pub fn new(modes: usize) -> Self {
        Self {
            modes,
            elements: Vec::new(),
        }
    }

    pub fn push(&mut self, element: OpticalElement) -> Result<()> {
        element.validate(self.modes)?;
        self.elements.push(element);
        Ok(())
    }

    pub fn with(mut self, element: OpticalElement) -> Result<Self> {
        self.push(element)?;
        Ok(self)
    }

    pub fn extend(&mut self, other: &OpticalCircuit) -> Result<()> {
        for e in &other.elements {
            self.push(e.clone())?;
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn elements(&self) -> &[OpticalElement] {
        &self.elements
    }

    pub fn is_linear(&self) -> bool {
        self.elements.iter().all(OpticalElement::is_linear)
    }

    pub fn kerr_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| matches!(e, OpticalElement::CrossKerr { .. }))
            .count()
    }

    /// Product of the success probabilities of all heralded C-S elements.
    pub fn herald_factor(&self) -> f64 {
        self.elements
            .iter()
            .map(|e| match e {
                OpticalElement::HeraldedCs { success, .. } => *success,
                _ => 1.0,
            })
            .product()
    }

    /// Single-photon mode matrix; fails if any element is nonlinear.
    pub fn mode_matrix(&self) -> Result<DMatrix<C64>> {
        single_photon_transfer(&self.elements, self.modes)
    }

    /// Many-photon operator on `basis`, element by element.
    pub fn fock_operator(&self, basis: &FockBasis) -> Result<DMatrix<C64>> {
        if basis.modes() != self.modes {
            return Err(Error::LengthMismatch {
                expected: self.modes,
                got: basis.modes(),
            });
        }
        let mut total = DMatrix::<C64>::identity(basis.len(), basis.len());
        for e in &self.elements {
            let op = if e.is_linear() {
                lift_to_fock(&e.mode_matrix(self.modes)?, basis)?
            } else {
                let mut diag = DMatrix::<C64>::identity(basis.len(), basis.len());
                let (a, b, chi) = match *e {
                    OpticalElement::CrossKerr { modes: (a, b), chi } => (a, b, chi),
                    OpticalElement::HeraldedCs { modes: (a, b), .. } => {
                        (a, b, std::f64::consts::PI)
                    }
                    _ => unreachable!("only Kerr-type elements are nonlinear"),
                };
                for (i, occ) in basis.states().iter().enumerate() {
                    diag[(i, i)] = C64::from_polar(1.0, chi * occ[a] as f64 * occ[b] as f64);
                }
                diag
            };
            total = op * total;
        }
        Ok(total)
    }

    pub fn apply(&self, state: &OpticalState) -> Result<OpticalState> {
        if state.basis().modes() != self.modes {
            return Err(Error::LengthMismatch {
                expected: self.modes,
                got: state.basis().modes(),
            });
        }
        let mut s = state.clone();
        // consecutive linear elements are merged into one interferometer
        let mut pending: Vec<OpticalElement> = Vec::new();
        for e in &self.elements {
            if e.is_linear() {
                pending.push(e.clone());
                continue;
            }
            if !pending.is_empty() {
                s = s.apply_mode_matrix(&single_photon_transfer(&pending, self.modes)?)?;
                pending.clear();
            }
            s = s.apply_element(e)?;
        }
        if !pending.is_empty() {
            s = s.apply_mode_matrix(&single_photon_transfer(&pending, self.modes)?)?;
        }
        Ok(s)
    }
}
