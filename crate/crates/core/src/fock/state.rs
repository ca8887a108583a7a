use std::fmt;

use nalgebra::{DMatrix, DVector};

use super::{evolve_occupation, FockBasis, OpticalElement};
use crate::error::{Error, Result};
use crate::qudit::NORM_TOL;
use crate::C64;

/// A pure state of `m` modes holding exactly `N` photons.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalState {
    basis: FockBasis,
    amps: DVector<C64>,
}

impl OpticalState {
    pub fn new(basis: FockBasis, amps: DVector<C64>) -> Result<Self> {
        let state = Self::unchecked(basis, amps)?;
        let norm = state.norm_squared();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    fn unchecked(basis: FockBasis, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != basis.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                got: amps.len(),
            });
        }
        Ok(Self { basis, amps })
    }

    pub fn from_occupation(occupation: &[u8]) -> Result<Self> {
        let photons = occupation.iter().map(|&n| n as usize).sum();
        let basis = FockBasis::new(occupation.len(), photons)?;
        let mut amps = DVector::zeros(basis.len());
        amps[basis.require_index(occupation)?] = C64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    /// Normalized superposition of occupations with the given weights.
    pub fn superposition(basis: FockBasis, terms: &[(Vec<u8>, C64)]) -> Result<Self> {
        let mut amps = DVector::zeros(basis.len());
        for (occ, amp) in terms {
            amps[basis.require_index(occ)?] += amp;
        }
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(basis, amps / C64::new(norm, 0.0))
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, occupation: &[u8]) -> Result<C64> {
        Ok(self.amps[self.basis.require_index(occupation)?])
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.norm_squared()
    }

    /// Nonzero components, in basis order.
    pub fn terms(&self, threshold: f64) -> Vec<(&[u8], C64)> {
        self.basis
            .states()
            .iter()
            .zip(self.amps.iter())
            .filter(|(_, a)| a.norm() > threshold)
            .map(|(s, a)| (s.as_slice(), *a))
            .collect()
    }

    fn modes_check(&self, modes: &[usize]) -> Result<()> {
        for (k, &m) in modes.iter().enumerate() {
            if m >= self.basis.modes() {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    modes: self.basis.modes(),
                });
            }
            if modes[..k].contains(&m) {
                return Err(Error::RepeatedMode(modes.to_vec()));
            }
        }
        Ok(())
    }

    /// Multiplies each component by `exp(i chi n_a n_b)`.
    pub fn apply_kerr(&self, chi: f64, mode_a: usize, mode_b: usize) -> Result<Self> {
        self.modes_check(&[mode_a, mode_b])?;
        let mut out = self.clone();
        for (i, occ) in self.basis.states().iter().enumerate() {
            let k = occ[mode_a] as f64 * occ[mode_b] as f64;
            if k != 0.0 {
                out.amps[i] *= C64::from_polar(1.0, chi * k);
            }
        }
        Ok(out)
    }

    pub fn apply_hwp(&self, theta: f64, mode_h: usize, mode_v: usize) -> Result<Self> {
        self.apply_element(&OpticalElement::HalfWavePlate {
            modes: (mode_h, mode_v),
            theta,
        })
    }

    pub fn apply_pbs(&self, path_a: (usize, usize), path_b: (usize, usize)) -> Result<Self> {
        self.apply_element(&OpticalElement::PolarizingBeamSplitter { path_a, path_b })
    }

    /// Evolves through a linear interferometer with mode matrix `u`.
    pub fn apply_mode_matrix(&self, u: &DMatrix<C64>) -> Result<Self> {
        if u.nrows() != self.basis.modes() || u.ncols() != self.basis.modes() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} mode matrix on {} modes",
                u.nrows(),
                u.ncols(),
                self.basis.modes()
            )));
        }
        let mut amps = DVector::zeros(self.basis.len());
        for (i, occ) in self.basis.states().iter().enumerate() {
            let a = self.amps[i];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (out, c) in evolve_occupation(u, occ) {
                let j = self.basis.index_of(&out).expect("photon number is conserved");
                amps[j] += a * c;
            }
        }
        Ok(Self {
            basis: self.basis.clone(),
            amps,
        })
    }

    /// Applies one element. A heralded C-S acts as its ideal unitary here;
    /// its success probability is tracked by the enclosing circuit.
    pub fn apply_element(&self, element: &OpticalElement) -> Result<Self> {
        match *element {
            OpticalElement::CrossKerr { modes: (a, b), chi } => self.apply_kerr(chi, a, b),
            OpticalElement::HeraldedCs { modes: (a, b), .. } => {
                element.validate(self.basis.modes())?;
                self.apply_kerr(std::f64::consts::PI, a, b)
            }
            _ => self.apply_mode_matrix(&element.mode_matrix(self.basis.modes())?),
        }
    }

    /// Keeps only components consistent with `pattern`.
    pub fn postselect(&self, pattern: &DetectionPattern) -> Result<PostselectOutcome> {
        if pattern.len() != self.basis.modes() {
            return Err(Error::LengthMismatch {
                expected: self.basis.modes(),
                got: pattern.len(),
            });
        }
        Ok(self.postselect_where(|occ| pattern.accepts(occ)))
    }

    /// Keeps only components whose occupation satisfies `accept`.
    pub fn postselect_where(&self, accept: impl Fn(&[u8]) -> bool) -> PostselectOutcome {
        let mut amps = self.amps.clone();
        for (i, occ) in self.basis.states().iter().enumerate() {
            if !accept(occ) {
                amps[i] = C64::new(0.0, 0.0);
            }
        }
        let probability = amps.norm_squared();
        PostselectOutcome {
            state: Self {
                basis: self.basis.clone(),
                amps,
            },
            probability,
            null: probability <= NULL_PROBABILITY,
        }
    }
}

/// Below this a post-selection is reported as never occurring.
pub const NULL_PROBABILITY: f64 = 1e-24;

/// Result of conditioning on a detection event.
#[derive(Debug, Clone)]
pub struct PostselectOutcome {
    /// Unnormalized; its squared norm is `probability`.
    pub state: OpticalState,
    pub probability: f64,
    /// The pattern cannot occur.
    pub null: bool,
}

impl PostselectOutcome {
    pub fn normalized(&self) -> Option<OpticalState> {
        if self.null {
            return None;
        }
        let mut s = self.state.clone();
        s.amps /= C64::new(self.probability.sqrt(), 0.0);
        Some(s)
    }
}

/// What a detector on one mode must see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeCondition {
    Any,
    Exactly(u8),
}

/// A per-mode detection condition. `Exactly(0)` is a zero detection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DetectionPattern {
    conditions: Vec<ModeCondition>,
}

impl DetectionPattern {
    pub fn new(conditions: Vec<ModeCondition>) -> Self {
        Self { conditions }
    }

    pub fn unconstrained(modes: usize) -> Self {
        Self::new(vec![ModeCondition::Any; modes])
    }

    pub fn exact(occupation: &[u8]) -> Self {
        Self::new(occupation.iter().map(|&n| ModeCondition::Exactly(n)).collect())
    }

    /// Zero photons in each of `modes`, anything elsewhere.
    pub fn zeros(total_modes: usize, modes: &[usize]) -> Result<Self> {
        let mut p = Self::unconstrained(total_modes);
        for &m in modes {
            p.set(m, ModeCondition::Exactly(0))?;
        }
        Ok(p)
    }

    pub fn set(&mut self, mode: usize, condition: ModeCondition) -> Result<()> {
        let modes = self.conditions.len();
        let slot = self
            .conditions
            .get_mut(mode)
            .ok_or(Error::ModeOutOfRange { mode, modes })?;
        *slot = condition;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn conditions(&self) -> &[ModeCondition] {
        &self.conditions
    }

    pub fn is_unconstrained(&self) -> bool {
        self.conditions.iter().all(|c| *c == ModeCondition::Any)
    }

    pub fn accepts(&self, occupation: &[u8]) -> bool {
        self.conditions
            .iter()
            .zip(occupation)
            .all(|(c, &n)| match c {
                ModeCondition::Any => true,
                ModeCondition::Exactly(k) => *k == n,
            })
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .conditions
            .iter()
            .map(|c| match c {
                ModeCondition::Any => "*".to_string(),
                ModeCondition::Exactly(n) => n.to_string(),
            })
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Every way `photons` photons can be counted on the `detected` modes, each
/// as a pattern leaving the other modes free. The patterns are disjoint and
/// together cover the whole Fock space.
pub fn exhaustive_partition(
    total_modes: usize,
    photons: usize,
    detected: &[usize],
) -> Result<Vec<DetectionPattern>> {
    let mut out = Vec::new();
    let mut counts = vec![0u8; detected.len()];
    let free = detected.len() < total_modes;
    partition_rec(&mut out, &mut counts, 0, photons, free, total_modes, detected)?;
    Ok(out)
}

fn partition_rec(
    out: &mut Vec<DetectionPattern>,
    counts: &mut Vec<u8>,
    k: usize,
    left: usize,
    free: bool,
    total_modes: usize,
    detected: &[usize],
) -> Result<()> {
    if k == detected.len() {
        // photons not seen on detected modes must fit in the free ones
        if left == 0 || free {
            let mut p = DetectionPattern::unconstrained(total_modes);
            for (&m, &n) in detected.iter().zip(counts.iter()) {
                p.set(m, ModeCondition::Exactly(n))?;
            }
            out.push(p);
        }
        return Ok(());
    }
    for n in 0..=left {
        counts[k] = n as u8;
        partition_rec(out, counts, k + 1, left - n, free, total_modes, detected)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn kerr_flips_only_double_occupancy() {
        let basis = FockBasis::new(4, 2).unwrap();
        let s = OpticalState::superposition(
            basis,
            &[
                (vec![1, 0, 1, 0], c(1.0)),
                (vec![1, 0, 0, 1], c(1.0)),
                (vec![0, 1, 1, 0], c(1.0)),
                (vec![0, 1, 0, 1], c(1.0)),
            ],
        )
        .unwrap();
        let out = s.apply_kerr(PI, 1, 3).unwrap();
        assert!((out.amplitude(&[0, 1, 0, 1]).unwrap() - c(-0.5)).norm() < 1e-15);
        assert_eq!(out.amplitude(&[1, 0, 1, 0]).unwrap(), c(0.5));
        assert_eq!(s.apply_kerr(0.0, 1, 3).unwrap(), s);
    }

    #[test]
    fn hwp_at_22_5_degrees() {
        let theta = 22.5f64.to_radians();
        let h = OpticalState::from_occupation(&[1, 0]).unwrap();
        let d = h.apply_hwp(theta, 0, 1).unwrap();
        assert!((d.amplitude(&[1, 0]).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((d.amplitude(&[0, 1]).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let v = OpticalState::from_occupation(&[0, 1]).unwrap();
        let a = v.apply_hwp(theta, 0, 1).unwrap();
        assert!((a.amplitude(&[1, 0]).unwrap() - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((a.amplitude(&[0, 1]).unwrap() + c(FRAC_1_SQRT_2)).norm() < 1e-15);
        let flipped = v.apply_hwp(0.0, 0, 1).unwrap();
        assert!((flipped.amplitude(&[0, 1]).unwrap() + c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn pbs_routes_polarizations() {
        let v = OpticalState::from_occupation(&[0, 1, 0, 0]).unwrap();
        let out = v.apply_pbs((0, 1), (2, 3)).unwrap();
        assert_eq!(out.amplitude(&[0, 0, 0, 1]).unwrap(), c(1.0));
        let h = OpticalState::from_occupation(&[1, 0, 0, 0]).unwrap();
        assert_eq!(h.apply_pbs((0, 1), (2, 3)).unwrap(), h);

        let basis = FockBasis::new(4, 1).unwrap();
        let s = OpticalState::superposition(
            basis,
            &[(vec![1, 0, 0, 0], c(0.6)), (vec![0, 1, 0, 0], C64::new(0.0, 0.8))],
        )
        .unwrap();
        let back = s.apply_pbs((0, 1), (2, 3)).unwrap().apply_pbs((0, 1), (2, 3)).unwrap();
        assert!((back.amplitudes() - s.amplitudes()).norm() < 1e-15);
    }

    #[test]
    fn postselection_cases() {
        let s = OpticalState::from_occupation(&[1, 1]).unwrap();
        let s = s.apply_element(&OpticalElement::beamsplitter(0, 1, 0.5)).unwrap();
        let all = s.postselect(&DetectionPattern::unconstrained(2)).unwrap();
        assert!((all.probability - 1.0).abs() < 1e-14);
        let coincidence = s.postselect(&DetectionPattern::exact(&[1, 1])).unwrap();
        assert!(coincidence.null);
        assert!(coincidence.normalized().is_none());
        let bunched = s.postselect(&DetectionPattern::zeros(2, &[1]).unwrap()).unwrap();
        assert!((bunched.probability - 0.5).abs() < 1e-14);
        let n = bunched.normalized().unwrap();
        assert!((n.norm_squared() - 1.0).abs() < 1e-14);
        assert!(s.postselect(&DetectionPattern::unconstrained(3)).is_err());
    }

    #[test]
    fn partition_covers_everything() {
        let s = OpticalState::from_occupation(&[1, 1, 1, 0, 0]).unwrap();
        let u = crate::random::random_unitary(5, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3));
        let s = s.apply_mode_matrix(&u).unwrap();
        for detected in [vec![0], vec![1, 3], vec![0, 1, 2, 3, 4]] {
            let parts = exhaustive_partition(5, 3, &detected).unwrap();
            let total: f64 = parts
                .iter()
                .map(|p| s.postselect(p).unwrap().probability)
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "{detected:?}");
        }
        assert_eq!(exhaustive_partition(3, 2, &[0, 1, 2]).unwrap().len(), 6);
    }
}
