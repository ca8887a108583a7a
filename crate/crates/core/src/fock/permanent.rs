//! Permanent-based transition amplitudes, independent of the polynomial
//! expansion used by [`lift_to_fock`](super::lift_to_fock).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// Permanent by Ryser's inclusion-exclusion formula, `O(2^n n^2)`.
pub fn permanent(a: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "permanent needs a square matrix");
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut total = C64::new(0.0, 0.0);
    for subset in 1u64..(1u64 << n) {
        let mut product = C64::new(1.0, 0.0);
        for i in 0..n {
            let row_sum: C64 = (0..n)
                .filter(|&j| subset >> j & 1 == 1)
                .map(|j| a[(i, j)])
                .sum();
            product *= row_sum;
        }
        if (n - subset.count_ones() as usize) % 2 == 1 {
            total -= product;
        } else {
            total += product;
        }
    }
    total
}

/// `<out| U |in>` for Fock states `input` and `output` through mode matrix `u`:
/// `per(U[out rows, in cols]) / sqrt(prod n_i! prod m_j!)`.
pub fn permanent_amplitude_oracle(u: &DMatrix<C64>, input: &[u8], output: &[u8]) -> Result<C64> {
    let n_in: usize = input.iter().map(|&n| n as usize).sum();
    let n_out: usize = output.iter().map(|&n| n as usize).sum();
    if n_in != n_out {
        return Err(Error::PhotonNumberMismatch {
            input: n_in,
            output: n_out,
        });
    }
    if input.len() != u.ncols() || output.len() != u.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "occupations of length {}/{} for a {}x{} mode matrix",
            input.len(),
            output.len(),
            u.nrows(),
            u.ncols()
        )));
    }
    let expand = |occ: &[u8]| -> Vec<usize> {
        occ.iter()
            .enumerate()
            .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
            .collect()
    };
    let cols = expand(input);
    let rows = expand(output);
    let sub = DMatrix::from_fn(n_in, n_in, |r, c| u[(rows[r], cols[c])]);
    let fact = |occ: &[u8]| -> f64 {
        occ.iter()
            .map(|&n| (1..=n as u32).map(f64::from).product::<f64>())
            .product()
    };
    Ok(permanent(&sub) / (fact(input) * fact(output)).sqrt())
}
