use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qudit_toffoli::fock::{FockBasis, OpticalState};
use qudit_toffoli::optical::heralded_modes::{P3_H, P3_V, P4_H, P4_V};
use qudit_toffoli::optical::{
    deterministic_ts_gate, fig6_gate, filter_pattern, filter_probability, heralded_layout,
    heralded_stages, heralded_ts_gate, kerr_cs_gate, naive_chain_gate, postselected_cs_gate,
    ququit_layout, success_probability_report, Fig6Parameters, Fig6Solution, GateRealization,
    Source, DEFAULT_CS_SUCCESS,
};
use qudit_toffoli::qudit::{PureState, WireDims};
use qudit_toffoli::random::random_amplitudes;
use qudit_toffoli::C64;

const HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn random_input(seed: u64) -> PureState {
    let amps = random_amplitudes(8, &mut ChaCha8Rng::seed_from_u64(seed));
    PureState::new(WireDims::qubits(3), amps).unwrap()
}

fn qubit_modes(a: usize, b: usize) -> [u8; 8] {
    let mut occ = [0u8; 8];
    occ[a] = 1;
    occ[2 + b] = 1;
    occ
}

/// The state after the heralded C-S gates, written out by hand: target 0
/// stays horizontal on path 4, target 1 ends on path 3 as V when `b = 0` and
/// as H when `b = 1`, and only `|1,0,1>` changes sign.
fn expected_after_cs(input: &PureState) -> OpticalState {
    let mut terms = Vec::new();
    for idx in 0..8 {
        let (a, b, t) = (idx >> 2, (idx >> 1) & 1, idx & 1);
        let mut occ = qubit_modes(a, b);
        let sign = if idx == 0b101 { -1.0 } else { 1.0 };
        match (t, b) {
            (0, _) => occ[P4_H] = 1,
            (_, 0) => occ[P3_V] = 1,
            _ => occ[P3_H] = 1,
        }
        terms.push((occ.to_vec(), input.amplitudes()[idx] * sign));
    }
    OpticalState::superposition(FockBasis::new(8, 3).unwrap(), &terms).unwrap()
}

/// After the plates: path 4 holds `D`, path 3 holds `A` (from V) or `D` (from H).
fn expected_after_plates(input: &PureState) -> OpticalState {
    let mut terms = Vec::new();
    for idx in 0..8 {
        let (a, b, t) = (idx >> 2, (idx >> 1) & 1, idx & 1);
        let amp = input.amplitudes()[idx] * if idx == 0b101 { -1.0 } else { 1.0 };
        let (h, v, v_sign) = match (t, b) {
            (0, _) => (P4_H, P4_V, 1.0),
            (_, 0) => (P3_H, P3_V, -1.0),
            _ => (P3_H, P3_V, 1.0),
        };
        let mut oh = qubit_modes(a, b);
        oh[h] = 1;
        let mut ov = qubit_modes(a, b);
        ov[v] = 1;
        terms.push((oh.to_vec(), amp * HALF));
        terms.push((ov.to_vec(), amp * HALF * v_sign));
    }
    OpticalState::superposition(FockBasis::new(8, 3).unwrap(), &terms).unwrap()
}

#[test]
fn heralded_intermediate_states() {
    let stages = heralded_stages(DEFAULT_CS_SUCCESS).unwrap();
    for seed in 0..10 {
        let input = random_input(seed);
        let encoded = heralded_layout().encode_state(&input).unwrap();
        let mid = stages.after_cs.apply(&encoded).unwrap();
        let diff = mid.amplitudes() - expected_after_cs(&input).amplitudes();
        assert!(diff.camax() < 1e-12, "after C-S, seed {seed}");
        let plates = stages.after_plates.apply(&encoded).unwrap();
        let diff = plates.amplitudes() - expected_after_plates(&input).amplitudes();
        assert!(diff.camax() < 1e-12, "after plates, seed {seed}");
    }
}

#[test]
fn ququit_levels_after_cs() {
    // the target never leaves the four ququit modes, and its level is set by b
    let stages = heralded_stages(1.0).unwrap();
    let layout = ququit_layout();
    for idx in 0..8 {
        let digits = [idx >> 2, (idx >> 1) & 1, idx & 1];
        let out = stages
            .after_cs
            .apply(&heralded_layout().encode_basis(&digits).unwrap())
            .unwrap();
        let decoded = layout.decode(&out).unwrap();
        assert!(decoded.leakage < 1e-14);
        let level = match (digits[2], digits[1]) {
            (0, _) => 0,
            (_, 0) => 1,
            _ => 2,
        };
        let expected = layout
            .dims()
            .basis_index(&[digits[0], digits[1], level])
            .unwrap();
        assert!((decoded.amplitudes[expected].norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn filter_output_is_the_sign_gate() {
    let g = heralded_ts_gate(DEFAULT_CS_SUCCESS).unwrap();
    let lambda = g.analyze().unwrap().lambda;
    assert!((lambda.norm() - HALF).abs() < 1e-14);
    let stages = heralded_stages(DEFAULT_CS_SUCCESS).unwrap();
    for seed in 0..10 {
        let input = random_input(seed);
        let before = stages.after_plates.apply(&heralded_layout().encode_state(&input).unwrap()).unwrap();
        assert!((filter_probability(&before).unwrap() - 0.5).abs() < 1e-12);

        // half the norm leaves through path 3
        let decoded = g.run_logical(&input).unwrap().amplitudes;
        // amplitude 1/sqrt(2) and only |H,H,V> flips
        for idx in 0..8 {
            let sign = if idx == 0b001 { -1.0 } else { 1.0 };
            let expected = input.amplitudes()[idx] * lambda * sign;
            assert!((decoded[idx] - expected).norm() < 1e-12, "seed {seed}, idx {idx}");
        }
    }
}

#[test]
fn filter_is_linear() {
    let g = heralded_ts_gate(DEFAULT_CS_SUCCESS).unwrap();
    let (x, y) = (random_input(1), random_input(2));
    let (alpha, beta) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    let mixed = (x.amplitudes() * alpha + y.amplitudes() * beta).normalize();
    let z = PureState::new(WireDims::qubits(3), mixed.clone()).unwrap();
    let out_z = g.run_logical(&z).unwrap().amplitudes;
    let out_x = g.run_logical(&x).unwrap().amplitudes;
    let out_y = g.run_logical(&y).unwrap().amplitudes;
    let scale = (x.amplitudes() * alpha + y.amplitudes() * beta).norm();
    let combined = (out_x * alpha + out_y * beta) / c(scale);
    assert!((out_z - combined).camax() < 1e-12);
}

#[test]
fn filter_pattern_covers_path_three_only() {
    let p = filter_pattern();
    let mut occ = [0u8; 8];
    occ[P4_V] = 1;
    assert!(p.accepts(&occ));
    occ[P3_H] = 1;
    assert!(!p.accepts(&occ));
}

#[test]
fn heralded_success_scales_with_cs_success() {
    for cs in [1.0, 0.5, 0.25, 0.1] {
        let a = heralded_ts_gate(cs).unwrap().analyze().unwrap();
        assert!((a.success_probability - cs * cs / 2.0).abs() < 1e-15);
        assert_eq!(a.flipped, vec![0b001]);
    }
}

#[test]
fn postselected_cs_permanents_agree_with_fock_engine() {
    let gates: Vec<GateRealization> = vec![
        postselected_cs_gate(),
        naive_chain_gate(),
        fig6_gate(&Fig6Parameters::golden()).unwrap(),
    ];
    for g in &gates {
        let by_fock = g.logical_transfer().unwrap();
        let by_perm = g.logical_transfer_by_permanents().unwrap();
        assert!((by_fock - by_perm).camax() < 1e-12, "{}", g.name);
    }
}

#[test]
fn postselected_cs_transfer() {
    let t = postselected_cs_gate().logical_transfer().unwrap();
    let expected = [-1.0, -1.0, -1.0, 1.0];
    for i in 0..4 {
        for j in 0..4 {
            let e = if i == j { expected[i] / 3.0 } else { 0.0 };
            assert!((t[(i, j)] - c(e)).norm() < 1e-14);
        }
    }
}

#[test]
fn naive_chain_flips_hhv() {
    let a = naive_chain_gate().analyze().unwrap();
    assert_eq!(a.flipped, vec![0b001]);
    assert!((a.success_probability - 1.0 / 162.0).abs() < 1e-15);
    assert!(a.is_sign_gate(1e-12));
}

#[test]
fn full_evolutions_are_unitary() {
    let gates = vec![
        kerr_cs_gate(std::f64::consts::PI),
        deterministic_ts_gate(),
        heralded_ts_gate(DEFAULT_CS_SUCCESS).unwrap(),
        postselected_cs_gate(),
        naive_chain_gate(),
        fig6_gate(&Fig6Parameters::golden()).unwrap(),
    ];
    for g in &gates {
        assert!(g.full_unitarity_error().unwrap() <= 1e-9, "{}", g.name);
    }
}

#[test]
fn deterministic_gate_is_certain() {
    let a = deterministic_ts_gate().analyze().unwrap();
    assert!((a.success_probability - 1.0).abs() < 1e-12);
    assert!((a.min_success - 1.0).abs() < 1e-12);
    // qubit-qubit-qutrit indices; the target's level 2 picks up a sign too
    let g = deterministic_ts_gate();
    let digits: Vec<Vec<usize>> = a
        .flipped
        .iter()
        .map(|&i| g.input_layout.dims().basis_digits(i).unwrap())
        .collect();
    assert_eq!(digits, vec![vec![1, 0, 1], vec![1, 1, 2]]);
}

#[test]
fn golden_solution_reverifies() {
    let golden = Fig6Solution::golden();
    assert!(golden.converged);
    let a = fig6_gate(&golden.params).unwrap().analyze().unwrap();
    assert!((a.success_probability - golden.success_probability).abs() <= 1e-9);
    assert!((a.success_probability - 1.0 / 72.0).abs() <= 1e-6);
    assert_eq!(a.flipped, vec![0]);
    assert!(a.residual <= 1e-8);
    assert!((golden.params.coupler_1 - 1.0 / 3.0).abs() < 1e-15);
    assert!((golden.params.coupler_2 - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn parameter_files_accept_bare_or_wrapped_params() {
    let golden = Fig6Solution::golden();
    let bare = Fig6Parameters::from_json(&golden.params.to_json()).unwrap();
    let wrapped = Fig6Parameters::from_json(&golden.to_json()).unwrap();
    assert_eq!(bare, wrapped);
    assert!(Fig6Parameters::from_json("{}").is_err());
}

#[test]
fn off_optimum_point_is_not_a_sign_gate() {
    let mut p = Fig6Parameters::golden();
    p.split = 0.5;
    let a = fig6_gate(&p).unwrap().analyze().unwrap();
    assert!(!a.is_sign_gate(1e-6));
}

#[test]
fn report_rows() {
    let r = success_probability_report(&Fig6Parameters::golden()).unwrap();
    assert!(r.all_match());
    assert!(r.probabilities.len() >= 7);
    let simulated: Vec<&str> = r
        .probabilities
        .iter()
        .filter(|row| row.source == Source::Simulated)
        .map(|row| row.construction.as_str())
        .collect();
    assert!(simulated.iter().any(|n| n.contains("heralded")));
    assert!(simulated.iter().any(|n| n.contains("three-photon")));
    let counts: Vec<f64> = r.gate_counts.iter().map(|row| row.value).collect();
    assert_eq!(counts, vec![6.0, 5.0, 3.0, 64.0, 9.0]);
}
