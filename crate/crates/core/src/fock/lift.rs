use std::collections::HashMap;

use nalgebra::DMatrix;

use super::{FockBasis, Occupation};
use crate::error::{Error, Result};
use crate::qudit::unitarity_error;
use crate::C64;

fn factorial(n: u8) -> f64 {
    (1..=n as u32).map(f64::from).product()
}

/// Output amplitudes of the Fock state `input` under the mode matrix `u`.
///
/// Expands `prod_j (sum_i u[i,j] a_i^dagger)^{n_j} / sqrt(n_j!)` as a
/// polynomial in creation operators, then converts each monomial to a
/// normalized Fock ket.
pub fn evolve_occupation(u: &DMatrix<C64>, input: &[u8]) -> HashMap<Occupation, C64> {
    let m = u.nrows();
    let norm: f64 = input.iter().map(|&n| factorial(n)).product();
    let mut poly: HashMap<Occupation, C64> = HashMap::new();
    poly.insert(vec![0; m], C64::new(1.0 / norm.sqrt(), 0.0));

    for (j, &count) in input.iter().enumerate() {
        let column: Vec<(usize, C64)> = (0..m)
            .map(|i| (i, u[(i, j)]))
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .collect();
        for _ in 0..count {
            let mut next: HashMap<Occupation, C64> = HashMap::with_capacity(poly.len() * column.len());
            for (monomial, coeff) in &poly {
                for &(i, c) in &column {
                    let mut key = monomial.clone();
                    key[i] += 1;
                    *next.entry(key).or_insert(C64::new(0.0, 0.0)) += coeff * c;
                }
            }
            poly = next;
        }
    }

    poly.into_iter()
        .map(|(occ, coeff)| {
            let scale: f64 = occ.iter().map(|&n| factorial(n)).product();
            (occ, coeff * scale.sqrt())
        })
        .collect()
}

/// Many-photon unitary induced by the single-photon mode matrix `u`.
pub fn lift_to_fock(u: &DMatrix<C64>, basis: &FockBasis) -> Result<DMatrix<C64>> {
    if u.nrows() != basis.modes() || u.ncols() != basis.modes() {
        return Err(Error::DimensionMismatch(format!(
            "mode matrix is {}x{} but the basis has {} modes",
            u.nrows(),
            u.ncols(),
            basis.modes()
        )));
    }
    let deviation = unitarity_error(u);
    if deviation > 1e-10 {
        return Err(Error::NotUnitary { deviation });
    }
    let mut lifted = DMatrix::zeros(basis.len(), basis.len());
    for (col, input) in basis.states().iter().enumerate() {
        for (occ, amp) in evolve_occupation(u, input) {
            let row = basis
                .index_of(&occ)
                .expect("linear optics conserves photon number");
            lifted[(row, col)] += amp;
        }
    }
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{single_photon_transfer, OpticalElement};

    #[test]
    fn single_photon_lift_is_the_mode_matrix() {
        let u = single_photon_transfer(
            &[
                OpticalElement::beamsplitter(0, 1, 0.3),
                OpticalElement::beamsplitter(1, 2, 0.6),
                OpticalElement::PhaseShift { mode: 2, phi: 0.4 },
            ],
            3,
        )
        .unwrap();
        let basis = FockBasis::new(3, 1).unwrap();
        let lifted = lift_to_fock(&u, &basis).unwrap();
        // basis order for one photon is [1,0,0], [0,1,0], [0,0,1]
        assert!((lifted - &u).norm() < 1e-14);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let u = OpticalElement::beamsplitter(0, 1, 0.5).mode_matrix(2).unwrap();
        let out = evolve_occupation(&u, &[1, 1]);
        let coincidence = out.get(&vec![1, 1]).copied().unwrap_or_default();
        assert!(coincidence.norm() < 1e-15);
        assert!((out[&vec![2, 0]].norm_sqr() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn one_third_splitter_coincidence() {
        // per [[a, t], [t, -a]] = t^2 - a^2 = 2/3 - 1/3
        let u = OpticalElement::beamsplitter(0, 1, 1.0 / 3.0).mode_matrix(2).unwrap();
        let out = evolve_occupation(&u, &[1, 1]);
        let amp = out[&vec![1, 1]];
        assert!((amp - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let basis = FockBasis::new(2, 2).unwrap();
        let u = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(lift_to_fock(&u, &basis), Err(Error::NotUnitary { .. })));
    }
}
