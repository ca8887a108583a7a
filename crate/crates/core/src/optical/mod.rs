//! Optical realizations of the controlled-sign and Toffoli-sign gates.

mod fig6;
mod heralded;
mod kerr;
mod postselected;
mod realization;
mod report;
mod solver;

pub use fig6::{
    fig6_gate, fig6_layout, fig6_topology, Fig6Orientation, Fig6Parameters, FREE_PARAMETERS,
};
pub use heralded::{
    filter_pattern, filter_probability, heralded_layout, heralded_stages, heralded_ts_gate,
    ququit_layout, HeraldedStages, DEFAULT_CS_SUCCESS,
};
pub use kerr::{deterministic_ts_gate, kerr_cs_gate, modes};
pub use postselected::{naive_chain_gate, postselected_cs_gate, push_postselected_cs};
pub use realization::{analyze_transfer, linear_logical_transfer, GateAnalysis, GateRealization};
pub use report::{success_probability_report, Fraction, Report, ReportRow, Source};
pub use solver::{
    nelder_mead, solve_fig6_reflectivities, Fig6Solution, NelderMeadOptions, SolveOptions,
};

/// Mode indices of the three-photon gate.
pub mod fig6_modes {
    pub use super::fig6::{C1_B, C1_T, C2_B, C2_T, PRINCIPAL_MODES, TOTAL_MODES, T_B, T_T, X};
}

/// Path modes of the heralded gate.
pub mod heralded_modes {
    pub use super::heralded::{P3_H, P3_V, P4_H, P4_V};
}
