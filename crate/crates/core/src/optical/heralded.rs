//! Heralded Toffoli-sign gate with a passive polarization filter.
//!
//! Qubits `a` (modes 0, 1) and `b` (modes 2, 3) are polarization encoded.
//! The target enters on spatial path 4 (modes 6, 7); a PBS moves its
//! vertical part to path 3 (modes 4, 5), so the target spans four modes and
//! behaves as a ququit. Two heralded C-S gates act on path 3, then plates at
//! 22.5 degrees on both paths and a second PBS form the filter, which
//! succeeds on a zero detection in path 3.

use super::GateRealization;
use crate::error::Result;
use crate::fock::{DetectionPattern, LogicalLayout, OpticalCircuit, OpticalElement, OpticalState};

pub const P3_H: usize = 4;
pub const P3_V: usize = 5;
pub const P4_H: usize = 6;
pub const P4_V: usize = 7;

/// Success probability of one heralded C-S gate built from an entangled pair.
pub const DEFAULT_CS_SUCCESS: f64 = 0.25;

/// The heralded circuit cut at the points where intermediate states are
/// worth inspecting.
#[derive(Debug, Clone)]
pub struct HeraldedStages {
    /// Up to and including the second C-S gate.
    pub after_cs: OpticalCircuit,
    /// Plus the plates on both target paths.
    pub after_plates: OpticalCircuit,
    /// Plus the recombining PBS.
    pub full: OpticalCircuit,
}

fn pbs() -> OpticalElement {
    OpticalElement::PolarizingBeamSplitter {
        path_a: (P3_H, P3_V),
        path_b: (P4_H, P4_V),
    }
}

pub fn heralded_stages(cs_success: f64) -> Result<HeraldedStages> {
    let hadamard3 = OpticalElement::hwp_degrees(P3_H, P3_V, 22.5);
    let cs = |control: usize| OpticalElement::HeraldedCs {
        modes: (control, P3_V),
        success: cs_success,
    };
    let mut after_cs = OpticalCircuit::new(8);
    for e in [pbs(), hadamard3.clone(), cs(3), hadamard3.clone(), cs(1)] {
        after_cs.push(e)?;
    }
    let mut after_plates = after_cs.clone();
    after_plates.push(hadamard3)?;
    after_plates.push(OpticalElement::hwp_degrees(P4_H, P4_V, 22.5))?;
    let mut full = after_plates.clone();
    full.push(pbs())?;
    Ok(HeraldedStages {
        after_cs,
        after_plates,
        full,
    })
}

/// Qubits `a`, `b` and the target read from path 4.
pub fn heralded_layout() -> LogicalLayout {
    LogicalLayout::new(8, vec![vec![0, 1], vec![2, 3], vec![P4_H, P4_V]])
        .expect("groups are disjoint")
}

/// Qubits `a`, `b` and the target as a ququit between the two PBSs:
/// levels 0..3 are path-4 H, path-3 V, path-3 H, path-4 V.
pub fn ququit_layout() -> LogicalLayout {
    LogicalLayout::new(8, vec![vec![0, 1], vec![2, 3], vec![P4_H, P3_V, P3_H, P4_V]])
        .expect("groups are disjoint")
}

/// Zero photons at the path-3 output of the recombining PBS.
pub fn filter_pattern() -> DetectionPattern {
    DetectionPattern::zeros(8, &[P3_H, P3_V]).expect("modes are in range")
}

/// Probability that the filter sees nothing, for a state taken just before
/// the recombining PBS.
pub fn filter_probability(before_pbs: &OpticalState) -> Result<f64> {
    let after = before_pbs.apply_element(&pbs())?;
    Ok(after.postselect(&filter_pattern())?.probability)
}

pub fn heralded_ts_gate(cs_success: f64) -> Result<GateRealization> {
    let stages = heralded_stages(cs_success)?;
    Ok(GateRealization {
        name: format!("heralded qudit T-S (C-S success {cs_success})"),
        circuit: stages.full,
        input_layout: heralded_layout(),
        output_layout: heralded_layout(),
        condition: "both C-S heralds fire and path 3 is empty".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn flip_on_hhv() {
        let g = heralded_ts_gate(DEFAULT_CS_SUCCESS).unwrap();
        let a = g.analyze().unwrap();
        assert_eq!(a.flipped, vec![0b001]);
        assert!(a.residual < 1e-14);
        assert!((a.success_probability - 1.0 / 32.0).abs() < 1e-15);
        assert!((a.lambda.norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn target_h_stays_in_path_4() {
        let s = heralded_stages(1.0).unwrap();
        let input = heralded_layout().encode_basis(&[1, 0, 0]).unwrap();
        let mid = s.after_cs.apply(&input).unwrap();
        let amp = mid.amplitude(&[0, 1, 1, 0, 0, 0, 1, 0]).unwrap();
        assert!((amp - C64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
