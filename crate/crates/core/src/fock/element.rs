use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::unitarity_error;
use crate::C64;

/// Which of a beamsplitter's two modes picks up the sign on reflection.
///
/// With reflectivity `r` the block on `(first, second)` is
/// `[[sqrt(r), sqrt(1-r)], [sqrt(1-r), -sqrt(r)]]` for `Second`, and the
/// mirror image `[[-sqrt(r), sqrt(1-r)], [sqrt(1-r), sqrt(r)]]` for `First`.
/// "Reflection" keeps a photon in its own mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DottedSide {
    First,
    Second,
}

impl DottedSide {
    pub fn flipped(self) -> Self {
        match self {
            DottedSide::First => DottedSide::Second,
            DottedSide::Second => DottedSide::First,
        }
    }
}

/// A passive optical element, or one of the two diagonal phase interactions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpticalElement {
    BeamSplitter {
        modes: (usize, usize),
        reflectivity: f64,
        dotted: DottedSide,
    },
    /// Loss modeled as a beamsplitter coupling `mode` to an empty `ancilla`.
    Attenuator {
        mode: usize,
        ancilla: usize,
        transmission: f64,
        dotted: DottedSide,
    },
    /// Transmits H, exchanges V between the two spatial paths.
    PolarizingBeamSplitter {
        path_a: (usize, usize),
        path_b: (usize, usize),
    },
    /// Half-wave plate at `theta` radians on the `(h, v)` pair:
    /// `[[cos 2t, sin 2t], [sin 2t, -cos 2t]]`.
    HalfWavePlate { modes: (usize, usize), theta: f64 },
    PhaseShift { mode: usize, phi: f64 },
    /// `exp(i chi n_a n_b)`.
    CrossKerr { modes: (usize, usize), chi: f64 },
    /// Ideal controlled sign between two modes that succeeds with
    /// probability `success`; only the bookkeeping differs from a Kerr at pi.
    HeraldedCs {
        modes: (usize, usize),
        success: f64,
    },
}

impl OpticalElement {
    pub fn beamsplitter(a: usize, b: usize, reflectivity: f64) -> Self {
        OpticalElement::BeamSplitter {
            modes: (a, b),
            reflectivity,
            dotted: DottedSide::Second,
        }
    }

    pub fn hwp_degrees(h: usize, v: usize, degrees: f64) -> Self {
        OpticalElement::HalfWavePlate {
            modes: (h, v),
            theta: degrees.to_radians(),
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(
            self,
            OpticalElement::CrossKerr { .. } | OpticalElement::HeraldedCs { .. }
        )
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            OpticalElement::BeamSplitter { modes: (a, b), .. }
            | OpticalElement::HalfWavePlate { modes: (a, b), .. }
            | OpticalElement::CrossKerr { modes: (a, b), .. }
            | OpticalElement::HeraldedCs { modes: (a, b), .. } => vec![a, b],
            OpticalElement::Attenuator { mode, ancilla, .. } => vec![mode, ancilla],
            OpticalElement::PolarizingBeamSplitter {
                path_a: (h1, v1),
                path_b: (h2, v2),
            } => vec![h1, v1, h2, v2],
            OpticalElement::PhaseShift { mode, .. } => vec![mode],
        }
    }

    pub fn validate(&self, total_modes: usize) -> Result<()> {
        let modes = self.modes();
        for (k, &m) in modes.iter().enumerate() {
            if m >= total_modes {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    modes: total_modes,
                });
            }
            if modes[..k].contains(&m) {
                return Err(Error::RepeatedMode(modes.clone()));
            }
        }
        let unit = |x: f64, what: &str| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} {x} is outside [0, 1]")))
            }
        };
        match *self {
            OpticalElement::BeamSplitter { reflectivity, .. } => unit(reflectivity, "reflectivity"),
            OpticalElement::Attenuator { transmission, .. } => unit(transmission, "transmission"),
            OpticalElement::HeraldedCs { success, .. } => unit(success, "success probability"),
            _ => Ok(()),
        }
    }

    /// Embeds this element's single-photon action in `m x m`, `U[out, in]`.
    pub fn mode_matrix(&self, m: usize) -> Result<DMatrix<C64>> {
        self.validate(m)?;
        let mut u = DMatrix::<C64>::identity(m, m);
        let real = |x: f64| C64::new(x, 0.0);
        match *self {
            OpticalElement::BeamSplitter {
                modes: (a, b),
                reflectivity,
                dotted,
            } => set_block(&mut u, a, b, reflectivity, dotted),
            OpticalElement::Attenuator {
                mode,
                ancilla,
                transmission,
                dotted,
            } => set_block(&mut u, mode, ancilla, transmission, dotted),
            OpticalElement::PolarizingBeamSplitter {
                path_a: (_, v1),
                path_b: (_, v2),
            } => {
                u[(v1, v1)] = real(0.0);
                u[(v2, v2)] = real(0.0);
                u[(v1, v2)] = real(1.0);
                u[(v2, v1)] = real(1.0);
            }
            OpticalElement::HalfWavePlate {
                modes: (h, v),
                theta,
            } => {
                let (s, c) = (2.0 * theta).sin_cos();
                u[(h, h)] = real(c);
                u[(h, v)] = real(s);
                u[(v, h)] = real(s);
                u[(v, v)] = real(-c);
            }
            OpticalElement::PhaseShift { mode, phi } => {
                u[(mode, mode)] = C64::from_polar(1.0, phi);
            }
            OpticalElement::CrossKerr { .. } | OpticalElement::HeraldedCs { .. } => {
                return Err(Error::NonLinearElement(self.to_string()));
            }
        }
        Ok(u)
    }
}

fn set_block(u: &mut DMatrix<C64>, a: usize, b: usize, r: f64, dotted: DottedSide) {
    let (refl, trans) = (r.sqrt(), (1.0 - r).sqrt());
    let (sa, sb) = match dotted {
        DottedSide::First => (-refl, refl),
        DottedSide::Second => (refl, -refl),
    };
    u[(a, a)] = C64::new(sa, 0.0);
    u[(b, b)] = C64::new(sb, 0.0);
    u[(a, b)] = C64::new(trans, 0.0);
    u[(b, a)] = C64::new(trans, 0.0);
}

impl fmt::Display for OpticalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |d: DottedSide, a: usize, b: usize| match d {
            DottedSide::First => a,
            DottedSide::Second => b,
        };
        match *self {
            OpticalElement::BeamSplitter {
                modes: (a, b),
                reflectivity,
                dotted,
            } => write!(f, "bs {reflectivity} {a} {b} dotted={}", side(dotted, a, b)),
            OpticalElement::Attenuator {
                mode,
                ancilla,
                transmission,
                dotted,
            } => write!(
                f,
                "atten {transmission} {mode} {ancilla} dotted={}",
                side(dotted, mode, ancilla)
            ),
            OpticalElement::PolarizingBeamSplitter {
                path_a: (h1, v1),
                path_b: (h2, v2),
            } => write!(f, "pbs {h1} {v1} {h2} {v2}"),
            OpticalElement::HalfWavePlate {
                modes: (h, v),
                theta,
            } => write!(f, "hwp {} {h} {v}", theta.to_degrees()),
            OpticalElement::PhaseShift { mode, phi } => write!(f, "phase {phi} {mode}"),
            OpticalElement::CrossKerr { modes: (a, b), chi } => write!(f, "kerr {chi} {a} {b}"),
            OpticalElement::HeraldedCs {
                modes: (a, b),
                success,
            } => write!(f, "cs {success} {a} {b}"),
        }
    }
}

/// Composes linear elements, in order, into one `m x m` mode matrix.
pub fn single_photon_transfer(elements: &[OpticalElement], m: usize) -> Result<DMatrix<C64>> {
    let mut total = DMatrix::<C64>::identity(m, m);
    for element in elements {
        total = element.mode_matrix(m)? * total;
    }
    let deviation = unitarity_error(&total);
    if deviation > 1e-10 {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::max_abs_diff;

    #[test]
    fn balanced_splitter_is_hadamard() {
        let u = single_photon_transfer(&[OpticalElement::beamsplitter(0, 1, 0.5)], 2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[s, s, s, -s].map(|x| C64::new(x, 0.0)),
        );
        assert!(max_abs_diff(&u, &expected) < 1e-15);
    }

    #[test]
    fn empty_list_is_identity() {
        assert_eq!(single_photon_transfer(&[], 5).unwrap(), DMatrix::identity(5, 5));
    }

    #[test]
    fn splitter_is_an_involution() {
        for &r in &[0.0, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            for dotted in [DottedSide::First, DottedSide::Second] {
                let bs = OpticalElement::BeamSplitter {
                    modes: (2, 0),
                    reflectivity: r,
                    dotted,
                };
                let u = single_photon_transfer(&[bs.clone(), bs], 3).unwrap();
                assert!(max_abs_diff(&u, &DMatrix::identity(3, 3)) < 1e-15);
            }
        }
    }

    #[test]
    fn pbs_moves_only_vertical() {
        let pbs = OpticalElement::PolarizingBeamSplitter {
            path_a: (0, 1),
            path_b: (2, 3),
        };
        let u = pbs.mode_matrix(4).unwrap();
        assert_eq!(u[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(u[(3, 1)], C64::new(1.0, 0.0));
        assert_eq!(u[(1, 3)], C64::new(1.0, 0.0));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            OpticalElement::beamsplitter(0, 4, 0.5).mode_matrix(4),
            Err(Error::ModeOutOfRange { .. })
        ));
        assert!(matches!(
            OpticalElement::beamsplitter(1, 1, 0.5).mode_matrix(4),
            Err(Error::RepeatedMode(_))
        ));
        assert!(OpticalElement::beamsplitter(0, 1, 1.5).mode_matrix(4).is_err());
        let kerr = OpticalElement::CrossKerr {
            modes: (0, 1),
            chi: 1.0,
        };
        assert!(matches!(
            single_photon_transfer(&[kerr], 2),
            Err(Error::NonLinearElement(_))
        ));
    }
}
