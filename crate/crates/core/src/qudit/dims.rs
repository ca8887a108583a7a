use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-wire dimensions of a mixed-radix register.
///
/// Linear indices are big-endian: wire 0 is the most significant digit, so the
/// ket `|i,j,k>` over dims `(2,2,3)` sits at `i*6 + j*3 + k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct WireDims {
    dims: Vec<usize>,
    total: usize,
}

impl WireDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        for (wire, &dim) in dims.iter().enumerate() {
            if dim < 2 {
                return Err(Error::InvalidDimension { wire, dim });
            }
        }
        let total = dims.iter().product();
        Ok(Self { dims, total })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n]).expect("qubit dims are valid")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_wires(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn dim(&self, wire: usize) -> usize {
        self.dims[wire]
    }

    pub fn basis_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() {
            return Err(Error::LengthMismatch {
                expected: self.dims.len(),
                got: digits.len(),
            });
        }
        let mut index = 0;
        for (wire, (&digit, &dim)) in digits.iter().zip(&self.dims).enumerate() {
            if digit >= dim {
                return Err(Error::DigitOutOfRange { wire, digit, dim });
            }
            index = index * dim + digit;
        }
        Ok(index)
    }

    pub fn basis_digits(&self, index: usize) -> Result<Vec<usize>> {
        if index >= self.total {
            return Err(Error::IndexOutOfRange {
                index,
                total: self.total,
            });
        }
        let mut digits = vec![0; self.dims.len()];
        let mut rest = index;
        for (slot, &dim) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = rest % dim;
            rest /= dim;
        }
        Ok(digits)
    }

    /// Linear indices of the basis states whose digits are all 0 or 1, in
    /// increasing order. Position `k` in the returned list is the index of
    /// the same ket in a register of pure qubits.
    pub fn qubit_subspace(&self) -> Vec<usize> {
        (0..self.total)
            .filter(|&i| {
                self.basis_digits(i)
                    .map(|d| d.iter().all(|&x| x < 2))
                    .unwrap_or(false)
            })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for WireDims {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<WireDims> for Vec<usize> {
    fn from(dims: WireDims) -> Self {
        dims.dims
    }
}
