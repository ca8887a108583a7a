//! Penalty-continuation Nelder-Mead search for the three-photon gate.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fig6::{fig6_layout, fig6_topology, Fig6Orientation, Fig6Parameters, FREE_PARAMETERS};
use super::realization::{analyze_transfer, linear_logical_transfer};
use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    pub xtol: f64,
    pub ftol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 20_000,
            xtol: 1e-12,
            ftol: 1e-16,
            initial_step: 0.1,
        }
    }
}

/// Unconstrained Nelder-Mead minimization with standard coefficients.
/// Returns the best point, its value and the number of evaluations.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let f_spread = values[n] - values[0];
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= opts.ftol && x_spread <= opts.xtol {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let toward = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = toward(-1.0);
        let fr = f(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = toward(-2.0);
            let fe = f(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let c = toward(-0.5);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = toward(0.5);
            let fc = f(&c);
            (c, fc)
        };
        evals += 1;
        if fc < fr.min(values[n]) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            simplex[i] = simplex[i]
                .iter()
                .zip(&simplex[0])
                .map(|(v, b)| b + 0.5 * (v - b))
                .collect();
            values[i] = f(&simplex[i]);
        }
        evals += n;
    }
    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("simplex is non-empty");
    (simplex[best].clone(), values[best], evals)
}

/// Below this a pattern fit is the trivial all-zero transfer.
const MIN_SUCCESS: f64 = 1e-6;

/// The single sign the three-photon gate should flip: `|000>`.
const SIGNS: [f64; 8] = [-1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];

fn to_unit(x: &[f64]) -> [f64; FREE_PARAMETERS] {
    let mut p = [0.0; FREE_PARAMETERS];
    for (pi, xi) in p.iter_mut().zip(x) {
        *pi = xi.sin().powi(2);
    }
    p
}

fn transfer(params: &Fig6Parameters) -> Result<DMatrix<C64>> {
    let u = fig6_topology(params)?.mode_matrix()?;
    let layout = fig6_layout();
    linear_logical_transfer(&u, &layout, &layout)
}

/// `(|lambda|^2, residual)` with `lambda` the projection onto the target
/// sign pattern and `residual` the squared distance from `lambda * pattern`.
fn pattern_fit(t: &DMatrix<C64>) -> (f64, f64) {
    let lambda: C64 = SIGNS
        .iter()
        .enumerate()
        .map(|(i, s)| t[(i, i)] * *s)
        .sum::<C64>()
        / 8.0;
    let mut residual = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            let expected = if i == j { lambda * SIGNS[i] } else { C64::new(0.0, 0.0) };
            residual += (t[(i, j)] - expected).norm_sqr();
        }
    }
    (lambda.norm_sqr(), residual)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    pub starts: usize,
    /// Penalty weights, applied in order.
    pub penalties: [f64; 4],
    pub nelder_mead: NelderMeadOptions,
    /// A point is accepted when every logical amplitude is within this of
    /// `lambda * pattern`.
    pub amplitude_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            seed: 72,
            starts: 16,
            penalties: [1e1, 1e3, 1e5, 1e7],
            nelder_mead: NelderMeadOptions::default(),
            amplitude_tol: 1e-9,
        }
    }
}

/// Best point found by [`solve_fig6_reflectivities`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig6Solution {
    pub params: Fig6Parameters,
    /// `|lambda|^2`, the post-selected success probability.
    pub success_probability: f64,
    /// Max entrywise deviation from `lambda * diag(-1, 1, ..., 1)`.
    pub max_amplitude_error: f64,
    pub flipped: Vec<usize>,
    pub converged: bool,
    pub evaluations: usize,
    pub orientations_tried: usize,
}

/// Maximizes the success probability over the free reflectivities subject to
/// the transfer being `lambda * diag(-1, 1, ..., 1)`.
///
/// Each multistart draws a point uniformly in the angle box, where
/// parameter `p = sin^2(x)` keeps every value inside `[0, 1]`. It minimizes
/// `-|lambda|^2 + mu * residual` for each penalty weight `mu` in turn, then
/// polishes on the residual alone. The default orientation is tried first;
/// the other seven are tried only if it fails.
pub fn solve_fig6_reflectivities(opts: &SolveOptions) -> Result<Fig6Solution> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<Fig6Solution> = None;
    let mut evaluations = 0;
    let mut orientations = vec![Fig6Orientation::default()];
    orientations.extend(
        Fig6Orientation::all()
            .into_iter()
            .filter(|o| *o != Fig6Orientation::default()),
    );

    for (tried, orientation) in orientations.into_iter().enumerate() {
        for _ in 0..opts.starts {
            let x0: Vec<f64> = (0..FREE_PARAMETERS)
                .map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_2))
                .collect();
            let eval = |x: &[f64]| -> Option<(f64, f64)> {
                let p = Fig6Parameters::from_free(&to_unit(x), orientation);
                transfer(&p).ok().map(|t| pattern_fit(&t))
            };
            let mut x = x0;
            for &mu in &opts.penalties {
                let (next, _, used) = nelder_mead(
                    |x| eval(x).map_or(f64::INFINITY, |(l, r)| -l + mu * r),
                    &x,
                    &opts.nelder_mead,
                );
                x = next;
                evaluations += used;
            }
            let polish = NelderMeadOptions {
                initial_step: 1e-4,
                ..opts.nelder_mead
            };
            let (x, _, used) =
                nelder_mead(|x| eval(x).map_or(f64::INFINITY, |(_, r)| r), &x, &polish);
            evaluations += used;

            let params = Fig6Parameters::from_free(&to_unit(&x), orientation);
            let t = transfer(&params)?;
            let analysis = analyze_transfer("", &t, 1.0);
            let (lambda_sq, _) = pattern_fit(&t);
            let candidate = Fig6Solution {
                params,
                success_probability: lambda_sq,
                max_amplitude_error: analysis.residual,
                flipped: analysis.flipped.clone(),
                converged: analysis.residual < opts.amplitude_tol
                    && analysis.flipped == [0]
                    && lambda_sq > MIN_SUCCESS,
                evaluations: 0,
                orientations_tried: tried + 1,
            };
            let better = match &best {
                None => true,
                Some(b) => match (candidate.converged, b.converged) {
                    (true, false) => true,
                    (false, true) => false,
                    (true, true) => candidate.success_probability > b.success_probability,
                    (false, false) => candidate.max_amplitude_error < b.max_amplitude_error,
                },
            };
            if better {
                best = Some(candidate);
            }
        }
        if best.as_ref().is_some_and(|b| b.converged) {
            break;
        }
    }
    let mut best = best.ok_or_else(|| Error::Solver("no starts were run".into()))?;
    best.evaluations = evaluations;
    Ok(best)
}

const GOLDEN: &str = include_str!("../../data/fig6_params.json");

impl Fig6Solution {
    /// The solved point shipped with the crate, as written by the solver.
    pub fn golden() -> Self {
        Self::from_json(GOLDEN).expect("bundled solution parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("solution file: {e}")))?;
        s.params.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Solver(format!(
                "best point has amplitude error {:.3e}, success probability {:.9}, flips {:?}",
                self.max_amplitude_error, self.success_probability, self.flipped
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, fx, _) = nelder_mead(rosen, &[-1.2, 1.0], &NelderMeadOptions::default());
        assert!(fx < 1e-14, "{fx}");
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_on_a_quadratic_bowl() {
        let bowl = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * (v - 0.3).powi(2)).sum();
        let (x, _, _) = nelder_mead(bowl, &[0.0; 5], &NelderMeadOptions::default());
        for v in x {
            assert!((v - 0.3).abs() < 1e-6);
        }
    }
}
