//! Three-photon post-selected Toffoli-sign gate.
//!
//! Principal modes: control 1 (top, bottom), target (top, bottom), an extra
//! target arm `X`, control 2 (top, bottom). The target's top mode threads two
//! interferometers formed with `X`. In the first, its arm meets control 1's
//! bottom mode on a 1/3 beamsplitter; in the second, the `X` arm meets
//! control 2's top mode on another 1/3 beamsplitter. Attenuators into vacuum
//! ancillas balance every path so that all eight coincidence amplitudes have
//! equal magnitude.

use serde::{Deserialize, Serialize};

use super::GateRealization;
use crate::error::{Error, Result};
use crate::fock::{DottedSide, LogicalLayout, OpticalCircuit, OpticalElement};

pub const C1_T: usize = 0;
pub const C1_B: usize = 1;
pub const T_T: usize = 2;
pub const X: usize = 3;
pub const T_B: usize = 4;
pub const C2_T: usize = 5;
pub const C2_B: usize = 6;
pub const PRINCIPAL_MODES: usize = 7;
const ANCILLA_C1_T: usize = 7;
const ANCILLA_C2_B: usize = 8;
const ANCILLA_T_B: usize = 9;
const ANCILLA_X: usize = 10;
const ANCILLA_T_T: usize = 11;
pub const TOTAL_MODES: usize = 12;

/// Which mode of each free beamsplitter carries the reflection sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fig6Orientation {
    pub split: DottedSide,
    pub recombine: DottedSide,
    pub final_splitter: DottedSide,
}

impl Default for Fig6Orientation {
    /// Sign on the `X` side of all three.
    fn default() -> Self {
        Self {
            split: DottedSide::Second,
            recombine: DottedSide::Second,
            final_splitter: DottedSide::Second,
        }
    }
}

impl Fig6Orientation {
    pub fn all() -> Vec<Self> {
        let sides = [DottedSide::Second, DottedSide::First];
        let mut out = Vec::new();
        for split in sides {
            for recombine in sides {
                for final_splitter in sides {
                    out.push(Self {
                        split,
                        recombine,
                        final_splitter,
                    });
                }
            }
        }
        out
    }
}

/// Reflectivities (beamsplitters, "stay in own mode" probability) and
/// transmissions (attenuators) of the topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig6Parameters {
    /// Target top arm against control 1 bottom; fixed at 1/3.
    pub coupler_1: f64,
    /// `X` arm against control 2 top; fixed at 1/3.
    pub coupler_2: f64,
    pub c1_top_transmission: f64,
    pub c2_bottom_transmission: f64,
    pub t_bottom_transmission: f64,
    /// Opens the first interferometer (target top vs `X`).
    pub split: f64,
    pub x_transmission: f64,
    /// Closes the first interferometer and opens the second.
    pub recombine: f64,
    pub t_top_transmission: f64,
    /// Closes the second interferometer; output on target top.
    pub final_splitter: f64,
    pub orientation: Fig6Orientation,
}

pub const FREE_PARAMETERS: usize = 8;

impl Fig6Parameters {
    /// Couplers at 1/3 and the free values taken from `free`, in field order.
    pub fn from_free(free: &[f64; FREE_PARAMETERS], orientation: Fig6Orientation) -> Self {
        Self {
            coupler_1: 1.0 / 3.0,
            coupler_2: 1.0 / 3.0,
            c1_top_transmission: free[0],
            c2_bottom_transmission: free[1],
            t_bottom_transmission: free[2],
            split: free[3],
            x_transmission: free[4],
            recombine: free[5],
            t_top_transmission: free[6],
            final_splitter: free[7],
            orientation,
        }
    }

    pub fn free(&self) -> [f64; FREE_PARAMETERS] {
        [
            self.c1_top_transmission,
            self.c2_bottom_transmission,
            self.t_bottom_transmission,
            self.split,
            self.x_transmission,
            self.recombine,
            self.t_top_transmission,
            self.final_splitter,
        ]
    }

    /// The solved point shipped with the crate.
    pub fn golden() -> Self {
        super::Fig6Solution::golden().params
    }

    /// Reads bare parameters or a solver output holding them under `params`.
    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |e: serde_json::Error| Error::InvalidParameter(format!("parameter file: {e}"));
        let mut value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
        if let Some(inner) = value.get_mut("params") {
            value = inner.take();
        }
        let p: Self = serde_json::from_value(value).map_err(bad)?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("parameters serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("coupler_1", self.coupler_1),
            ("coupler_2", self.coupler_2),
        ];
        for (name, v) in named.into_iter().chain(
            ["c1_top_transmission", "c2_bottom_transmission", "t_bottom_transmission", "split",
             "x_transmission", "recombine", "t_top_transmission", "final_splitter"]
                .into_iter()
                .zip(self.free()),
        ) {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

pub fn fig6_topology(params: &Fig6Parameters) -> Result<OpticalCircuit> {
    params.validate()?;
    let o = params.orientation;
    let bs = |a, b, reflectivity, dotted| OpticalElement::BeamSplitter {
        modes: (a, b),
        reflectivity,
        dotted,
    };
    let atten = |mode, ancilla, transmission| OpticalElement::Attenuator {
        mode,
        ancilla,
        transmission,
        dotted: DottedSide::Second,
    };
    let elements = [
        atten(C1_T, ANCILLA_C1_T, params.c1_top_transmission),
        atten(C2_B, ANCILLA_C2_B, params.c2_bottom_transmission),
        atten(T_B, ANCILLA_T_B, params.t_bottom_transmission),
        // first interferometer
        bs(T_T, X, params.split, o.split),
        bs(T_T, C1_B, params.coupler_1, DottedSide::First),
        atten(X, ANCILLA_X, params.x_transmission),
        bs(T_T, X, params.recombine, o.recombine),
        // second interferometer
        atten(T_T, ANCILLA_T_T, params.t_top_transmission),
        bs(X, C2_T, params.coupler_2, DottedSide::First),
        bs(T_T, X, params.final_splitter, o.final_splitter),
    ];
    let mut c = OpticalCircuit::new(TOTAL_MODES);
    for e in elements {
        c.push(e)?;
    }
    Ok(c)
}

/// Logical wires: control 1, target, control 2; logical 0 is the top mode.
pub fn fig6_layout() -> LogicalLayout {
    LogicalLayout::new(
        TOTAL_MODES,
        vec![vec![C1_T, C1_B], vec![T_T, T_B], vec![C2_T, C2_B]],
    )
    .expect("groups are disjoint")
}

pub fn fig6_gate(params: &Fig6Parameters) -> Result<GateRealization> {
    Ok(GateRealization {
        name: "post-selected three-photon T-S".into(),
        circuit: fig6_topology(params)?,
        input_layout: fig6_layout(),
        output_layout: fig6_layout(),
        condition: "one photon per wire; X and ancillas empty".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OpticalState;
    use crate::C64;

    fn hand_picked() -> Fig6Parameters {
        Fig6Parameters::from_free(
            &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 8.0, 0.75, 1.0, 0.5, 1.0, 0.25],
            Fig6Orientation::default(),
        )
    }

    // A photon on the target top mode alone, or with control 1's bottom mode
    // occupied, read out after the first interferometer.
    fn after_first_interferometer(c1_bottom: u8) -> OpticalState {
        let circuit = fig6_topology(&hand_picked()).unwrap();
        let mut first = OpticalCircuit::new(TOTAL_MODES);
        for e in &circuit.elements()[..7] {
            first.push(e.clone()).unwrap();
        }
        let mut occ = vec![0u8; TOTAL_MODES];
        occ[T_T] = 1;
        occ[C1_B] = c1_bottom;
        first.apply(&OpticalState::from_occupation(&occ).unwrap()).unwrap()
    }

    #[test]
    fn empty_control_sends_target_to_x_with_flip() {
        let s = after_first_interferometer(0);
        let mut x = vec![0u8; TOTAL_MODES];
        x[X] = 1;
        let mut top = vec![0u8; TOTAL_MODES];
        top[T_T] = 1;
        let amp = s.amplitude(&x).unwrap();
        assert!(s.amplitude(&top).unwrap().norm() < 1e-15);
        assert!((amp / amp.norm() - C64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn occupied_control_keeps_target_on_top() {
        let s = after_first_interferometer(1);
        let mut top = vec![0u8; TOTAL_MODES];
        top[T_T] = 1;
        top[C1_B] = 1;
        let mut x = vec![0u8; TOTAL_MODES];
        x[X] = 1;
        x[C1_B] = 1;
        let amp = s.amplitude(&top).unwrap();
        assert!(s.amplitude(&x).unwrap().norm() < 1e-15);
        assert!(amp.re > 0.0 && amp.im.abs() < 1e-15);
    }

    #[test]
    fn hand_picked_point_reaches_one_in_72() {
        let a = fig6_gate(&hand_picked()).unwrap().analyze().unwrap();
        assert_eq!(a.flipped, vec![0]);
        assert!(a.residual < 1e-14);
        assert!((a.success_probability - 1.0 / 72.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let mut p = hand_picked();
        p.split = 1.2;
        assert!(fig6_topology(&p).is_err());
        assert!(Fig6Parameters::from_json(&p.to_json()).is_err());
        assert_eq!(Fig6Parameters::from_json(&hand_picked().to_json()).unwrap(), hand_picked());
    }
}
