use nalgebra::DMatrix;
use num_complex::Complex64;

use super::WireDims;
use crate::error::{Error, Result};
use crate::C64;

/// Unitarity tolerance for exactly constructed gates.
pub const UNITARY_TOL: f64 = 1e-12;

/// A unitary acting on an ordered list of wires with given dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    wire_dims: Vec<usize>,
    matrix: DMatrix<C64>,
}

impl GateMatrix {
    /// Wraps `matrix`, checking shape and unitarity to [`UNITARY_TOL`].
    pub fn new(wire_dims: Vec<usize>, matrix: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(wire_dims, matrix, UNITARY_TOL)
    }

    pub fn with_tolerance(wire_dims: Vec<usize>, matrix: DMatrix<C64>, tol: f64) -> Result<Self> {
        let size: usize = wire_dims.iter().product();
        if wire_dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidGate(format!(
                "wire dims {wire_dims:?} contain a dimension below 2"
            )));
        }
        if matrix.nrows() != size || matrix.ncols() != size {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but wire dims {:?} need {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                wire_dims,
                size,
                size
            )));
        }
        let deviation = unitarity_error(&matrix);
        if deviation >= tol {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { wire_dims, matrix })
    }

    pub fn identity(wire_dims: Vec<usize>) -> Self {
        let size = wire_dims.iter().product();
        Self {
            wire_dims,
            matrix: DMatrix::identity(size, size),
        }
    }

    /// Builds the permutation gate sending basis state `i` to `perm[i]`.
    pub fn permutation(wire_dims: Vec<usize>, perm: &[usize]) -> Result<Self> {
        let size = perm.len();
        let mut matrix = DMatrix::zeros(size, size);
        for (i, &j) in perm.iter().enumerate() {
            if j >= size {
                return Err(Error::InvalidGate(format!("permutation target {j} >= {size}")));
            }
            matrix[(j, i)] = Complex64::new(1.0, 0.0);
        }
        Self::new(wire_dims, matrix)
    }

    pub fn diagonal(wire_dims: Vec<usize>, diag: &[C64]) -> Result<Self> {
        let matrix = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag));
        Self::new(wire_dims, matrix)
    }

    pub fn wire_dims(&self) -> &[usize] {
        &self.wire_dims
    }

    pub fn arity(&self) -> usize {
        self.wire_dims.len()
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            wire_dims: self.wire_dims.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self * other`, i.e. `other` applied first.
    pub fn compose(&self, other: &GateMatrix) -> Result<Self> {
        if self.wire_dims != other.wire_dims {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose gates over {:?} and {:?}",
                self.wire_dims, other.wire_dims
            )));
        }
        Ok(Self {
            wire_dims: self.wire_dims.clone(),
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// The full-register matrix of this gate acting on `wires`, identity elsewhere.
    pub fn embed(&self, dims: &WireDims, wires: &[usize]) -> Result<DMatrix<C64>> {
        check_targets(dims, self.wire_dims(), wires)?;
        let total = dims.total_dim();
        let sub = WireDims::new(self.wire_dims.clone())?;
        let mut out = DMatrix::zeros(total, total);
        for col in 0..total {
            let digits = dims.basis_digits(col)?;
            let sub_in = sub.basis_index(&wires.iter().map(|&w| digits[w]).collect::<Vec<_>>())?;
            let mut target = digits.clone();
            for sub_out in 0..sub.total_dim() {
                let amp = self.matrix[(sub_out, sub_in)];
                if amp == C64::new(0.0, 0.0) {
                    continue;
                }
                for (k, d) in sub.basis_digits(sub_out)?.into_iter().enumerate() {
                    target[wires[k]] = d;
                }
                out[(dims.basis_index(&target)?, col)] = amp;
            }
        }
        Ok(out)
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.matrix)
    }
}

/// `max |U^dagger U - I|` over entries.
pub fn unitarity_error(matrix: &DMatrix<C64>) -> f64 {
    let n = matrix.nrows();
    let product = matrix.adjoint() * matrix;
    max_abs_diff(&product, &DMatrix::identity(n, n))
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Validates a target list against register dims and the gate's declared wire dims.
pub(crate) fn check_targets(dims: &WireDims, gate_dims: &[usize], wires: &[usize]) -> Result<()> {
    if wires.len() != gate_dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "gate acts on {} wires but {} targets were given",
            gate_dims.len(),
            wires.len()
        )));
    }
    for (k, &w) in wires.iter().enumerate() {
        if w >= dims.num_wires() {
            return Err(Error::WireOutOfRange {
                wire: w,
                wires: dims.num_wires(),
            });
        }
        if wires[..k].contains(&w) {
            return Err(Error::RepeatedWire(w));
        }
        if dims.dim(w) != gate_dims[k] {
            return Err(Error::DimensionMismatch(format!(
                "wire {w} has dimension {} but the gate expects {}",
                dims.dim(w),
                gate_dims[k]
            )));
        }
    }
    Ok(())
}

/// Result of a global-phase equivalence check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEquivalence {
    pub equivalent: bool,
    /// Best-fit unit-modulus phase with `A ~ phase * B`.
    pub phase: C64,
    /// `max |A - phase * B|`.
    pub residual: f64,
}

/// Checks whether `a = lambda * b` for some unit-modulus `lambda`.
pub fn equiv_up_to_global_phase(
    a: &DMatrix<C64>,
    b: &DMatrix<C64>,
    tol: f64,
) -> Result<PhaseEquivalence> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compare {:?} with {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let overlap: C64 = b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let residual = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max);
    Ok(PhaseEquivalence {
        equivalent: residual < tol,
        phase,
        residual,
    })
}
