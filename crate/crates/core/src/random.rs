//! Seeded random unitaries and states for property checks.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::C64;

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix,
/// with the phases of `R`'s diagonal folded back into `Q`.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Uniformly random unit vector of length `n`.
pub fn random_amplitudes(n: usize, rng: &mut impl Rng) -> DVector<C64> {
    let v = DVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}
