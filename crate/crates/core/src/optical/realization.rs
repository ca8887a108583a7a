use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{
    exhaustive_partition, permanent_amplitude_oracle, Decoded, LogicalLayout, OpticalCircuit,
    OpticalState,
};
use crate::qudit::{unitarity_error, PureState};
use crate::C64;

/// An optical circuit together with how logical wires live on its modes.
///
/// A run succeeds when every output group holds exactly one photon and every
/// other mode is empty. Heralded elements additionally multiply the success
/// probability by their own success rates.
#[derive(Debug, Clone)]
pub struct GateRealization {
    pub name: String,
    pub circuit: OpticalCircuit,
    pub input_layout: LogicalLayout,
    pub output_layout: LogicalLayout,
    /// What has to be detected, in words.
    pub condition: String,
}

/// Summary of a realization's post-selected logical action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateAnalysis {
    pub name: String,
    /// Common diagonal amplitude, `T ~ lambda * diag(signs)`.
    pub lambda: C64,
    pub signs: Vec<i8>,
    /// Logical basis indices whose sign is flipped.
    pub flipped: Vec<usize>,
    /// Max entrywise `|T - lambda diag(signs)|`.
    pub residual: f64,
    /// `|lambda|^2` times the herald factor.
    pub success_probability: f64,
    pub herald_factor: f64,
    /// Extremes of the per-basis-input success probability.
    pub min_success: f64,
    pub max_success: f64,
}

impl GateAnalysis {
    pub fn is_sign_gate(&self, tol: f64) -> bool {
        self.residual < tol && self.max_success - self.min_success < tol
    }
}

impl fmt::Display for GateAnalysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.name)?;
        writeln!(f, "  success probability  {:.12}", self.success_probability)?;
        writeln!(f, "  herald factor        {}", self.herald_factor)?;
        writeln!(f, "  lambda               {:.12}", self.lambda)?;
        writeln!(f, "  flipped components   {:?}", self.flipped)?;
        writeln!(f, "  pattern residual     {:.3e}", self.residual)?;
        write!(
            f,
            "  input spread         {:.3e}",
            self.max_success - self.min_success
        )
    }
}

impl GateRealization {
    pub fn logical_dim(&self) -> usize {
        self.input_layout.dims().total_dim()
    }

    pub fn encode_basis(&self, index: usize) -> Result<OpticalState> {
        let digits = self.input_layout.dims().basis_digits(index)?;
        self.input_layout.encode_basis(&digits)
    }

    /// Output of the circuit on a logical input.
    pub fn run(&self, input: &PureState) -> Result<OpticalState> {
        self.circuit.apply(&self.input_layout.encode_state(input)?)
    }

    /// Post-selected output on a logical input, unnormalized.
    pub fn run_logical(&self, input: &PureState) -> Result<Decoded> {
        self.output_layout.decode(&self.run(input)?)
    }

    /// Column `j` holds the output-group amplitudes for logical input `j`.
    /// Herald factors are not included.
    pub fn logical_transfer(&self) -> Result<DMatrix<C64>> {
        let n_in = self.logical_dim();
        let n_out = self.output_layout.dims().total_dim();
        let mut t = DMatrix::zeros(n_out, n_in);
        for j in 0..n_in {
            let out = self.circuit.apply(&self.encode_basis(j)?)?;
            let decoded = self.output_layout.decode(&out)?;
            t.set_column(j, &decoded.amplitudes);
        }
        Ok(t)
    }

    /// The same matrix from permanents of the mode matrix; linear circuits only.
    pub fn logical_transfer_by_permanents(&self) -> Result<DMatrix<C64>> {
        let u = self.circuit.mode_matrix()?;
        linear_logical_transfer(&u, &self.input_layout, &self.output_layout)
    }

    pub fn analyze(&self) -> Result<GateAnalysis> {
        let t = self.logical_transfer()?;
        Ok(analyze_transfer(
            &self.name,
            &t,
            self.circuit.herald_factor(),
        ))
    }

    /// Max deviation from unitarity of the full many-photon evolution.
    pub fn full_unitarity_error(&self) -> Result<f64> {
        let op = self.circuit.fock_operator(&self.input_layout.basis()?)?;
        Ok(unitarity_error(&op))
    }

    /// For every logical basis input, `|1 - sum of probabilities|` over all
    /// detection patterns on every mode; the largest value is returned.
    pub fn completeness_error(&self) -> Result<f64> {
        let modes: Vec<usize> = (0..self.circuit.modes()).collect();
        let patterns =
            exhaustive_partition(self.circuit.modes(), self.input_layout.photons(), &modes)?;
        let mut worst = 0.0f64;
        for j in 0..self.logical_dim() {
            let out = self.circuit.apply(&self.encode_basis(j)?)?;
            let mut total = 0.0;
            for p in &patterns {
                total += out.postselect(p)?.probability;
            }
            worst = worst.max((total - 1.0).abs());
        }
        Ok(worst)
    }
}

/// Post-selected logical amplitudes of a linear network, one permanent each.
pub fn linear_logical_transfer(
    u: &DMatrix<C64>,
    input: &LogicalLayout,
    output: &LogicalLayout,
) -> Result<DMatrix<C64>> {
    if input.total_modes() != u.ncols() || output.total_modes() != u.nrows() {
        return Err(Error::DimensionMismatch(
            "layouts do not match the mode matrix".into(),
        ));
    }
    let (di, dout) = (input.dims(), output.dims());
    let mut t = DMatrix::zeros(dout.total_dim(), di.total_dim());
    for j in 0..di.total_dim() {
        let occ_in = input.encode(&di.basis_digits(j)?)?;
        for i in 0..dout.total_dim() {
            let occ_out = output.encode(&dout.basis_digits(i)?)?;
            t[(i, j)] = permanent_amplitude_oracle(u, &occ_in, &occ_out)?;
        }
    }
    Ok(t)
}

/// Fits `t ~ lambda * diag(signs)` with the majority sign taken as `+`.
pub fn analyze_transfer(name: &str, t: &DMatrix<C64>, herald_factor: f64) -> GateAnalysis {
    let n = t.ncols().min(t.nrows());
    let d: DVector<C64> = DVector::from_fn(n, |i, _| t[(i, i)]);
    let reference = d.iter().copied().find(|x| x.norm() > 0.0).unwrap_or(C64::new(1.0, 0.0));
    let unit = reference.conj() / reference.norm();
    let mut signs: Vec<i8> = d
        .iter()
        .map(|x| if (x * unit).re < 0.0 { -1 } else { 1 })
        .collect();
    if 2 * signs.iter().filter(|&&s| s < 0).count() > n {
        signs.iter_mut().for_each(|s| *s = -*s);
    }
    let lambda = d
        .iter()
        .zip(&signs)
        .map(|(x, &s)| x * s as f64)
        .sum::<C64>()
        / n as f64;

    let mut residual = 0.0f64;
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            let expected = if i == j { lambda * signs[i] as f64 } else { C64::new(0.0, 0.0) };
            residual = residual.max((t[(i, j)] - expected).norm());
        }
    }
    let per_input: Vec<f64> = (0..t.ncols())
        .map(|j| t.column(j).norm_squared() * herald_factor)
        .collect();
    GateAnalysis {
        name: name.to_string(),
        lambda,
        flipped: signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .map(|(i, _)| i)
            .collect(),
        signs,
        residual,
        success_probability: lambda.norm_sqr() * herald_factor,
        herald_factor,
        min_success: per_input.iter().copied().fold(f64::INFINITY, f64::min),
        max_success: per_input.iter().copied().fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_sign_is_positive() {
        let mut t = DMatrix::<C64>::identity(4, 4) * C64::new(0.0, -0.5);
        t[(0, 0)] = C64::new(0.0, 0.5);
        let a = analyze_transfer("x", &t, 1.0);
        assert_eq!(a.flipped, vec![0]);
        assert!((a.lambda - C64::new(0.0, -0.5)).norm() < 1e-15);
        assert!(a.residual < 1e-15);
        assert!((a.success_probability - 0.25).abs() < 1e-15);
    }

    #[test]
    fn off_diagonal_counts_as_residual() {
        let mut t = DMatrix::<C64>::identity(2, 2);
        t[(0, 1)] = C64::new(0.1, 0.0);
        let a = analyze_transfer("x", &t, 1.0);
        assert!((a.residual - 0.1).abs() < 1e-15);
        assert!(!a.is_sign_gate(1e-3));
    }
}
