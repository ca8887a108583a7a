//! `toffoli`: verification and report driver.
//!
//! Exit status is 0 when every check of the command passes, 1 when a check
//! fails and 2 for usage or input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qudit_toffoli::fock::text::parse_optical;
use qudit_toffoli::optical::{
    deterministic_ts_gate, fig6_gate, heralded_ts_gate, kerr_cs_gate, naive_chain_gate,
    postselected_cs_gate, solve_fig6_reflectivities, success_probability_report, Fig6Parameters,
    Fraction, GateAnalysis, SolveOptions, DEFAULT_CS_SUCCESS,
};
use qudit_toffoli::qudit::text::parse_circuit;
use qudit_toffoli::qudit::{circuit_unitary, equiv_up_to_global_phase, qubit_block, WireDims};
use qudit_toffoli::toffoli::{
    build_n_ts_circuit, build_ts_circuit, flipped_component, max_leakage, oracle_n_toffoli_sign,
    verify_decomposition,
};

#[derive(Parser, Debug)]
#[command(name = "toffoli", version, about = "Qudit-assisted Toffoli gate checks")]
struct Cli {
    /// Tolerance for exact checks.
    #[arg(long, global = true, default_value_t = 1e-10, value_parser = positive)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Construction {
    Kerr,
    Deterministic,
    Heralded,
    PostselectedCs,
    NaiveChain,
    Fig6,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the n-control Toffoli-sign circuit against its oracle.
    VerifyToffoli {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=8))]
        n: u32,
    },
    /// Simulate one optical construction.
    Simulate {
        which: Construction,
        /// Parameter file for the three-photon gate (default: bundled solution).
        #[arg(long)]
        params_file: Option<PathBuf>,
        /// Success probability of each heralded C-S gate.
        #[arg(long, default_value_t = DEFAULT_CS_SUCCESS, value_parser = probability)]
        cs_success: f64,
    },
    /// Comparison table of success probabilities and gate counts.
    Report {
        #[arg(long)]
        params_file: Option<PathBuf>,
    },
    /// Recover the three-photon gate's free reflectivities.
    SolveFig6 {
        #[arg(long, default_value_t = 72)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        /// Write the solved parameters here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a qudit circuit file.
    Circuit { file: PathBuf },
    /// Run an optical circuit file.
    Optical { file: PathBuf },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn probability(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        _ => Err(format!("`{s}` is not a probability")),
    }
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulationRecord {
    construction: String,
    success_probability: f64,
    exact: Option<String>,
    flipped: Vec<String>,
    pattern_residual: f64,
    herald_factor: f64,
    min_success: f64,
    max_success: f64,
    kerr_interactions: usize,
    checks: Vec<Check>,
    passed: bool,
}

enum Failure {
    Usage(String),
    Checks,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, record: &T, human: impl FnOnce() -> String) {
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(record).expect("records serialize")
        ),
        Format::Human => print!("{}", human()),
    }
}

fn verdict(passed: bool) -> Result<(), Failure> {
    if passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn load_params(path: &Option<PathBuf>) -> Result<Fig6Parameters, Failure> {
    match path {
        Some(p) => Ok(Fig6Parameters::from_json(&fs::read_to_string(p)?)?),
        None => Ok(Fig6Parameters::golden()),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::VerifyToffoli { n } => verify_toffoli(cli, *n as usize),
        Command::Simulate {
            which,
            params_file,
            cs_success,
        } => simulate(cli, *which, params_file, *cs_success),
        Command::Report { params_file } => {
            let report = success_probability_report(&load_params(params_file)?)?;
            emit(cli, &report, || report.to_string());
            verdict(report.all_match())
        }
        Command::SolveFig6 { seed, starts, out } => solve(cli, *seed, *starts, out),
        Command::Circuit { file } => circuit(cli, file),
        Command::Optical { file } => optical(cli, file),
    }
}

fn verify_toffoli(cli: &Cli, n: usize) -> Result<(), Failure> {
    let circ = build_n_ts_circuit(n)?;
    let oracle = oracle_n_toffoli_sign(n, flipped_component(n))?;
    let report = verify_decomposition(&circ, &oracle, n)?;
    emit(cli, &report, || report.to_string());
    verdict(report.passed(cli.tol))
}

fn bits(index: usize, width: usize) -> String {
    format!("|{index:0width$b}>")
}

fn digits(dims: &WireDims, index: usize) -> String {
    let d = dims.basis_digits(index).expect("index within the logical space");
    format!("|{}>", d.iter().map(|x| x.to_string()).collect::<String>())
}

fn probability_text(p: f64, tol: f64) -> Option<String> {
    Fraction::recognize(p, 5000, tol.min(1e-12)).map(|f| f.to_string())
}

fn simulate(
    cli: &Cli,
    which: Construction,
    params_file: &Option<PathBuf>,
    cs_success: f64,
) -> Result<(), Failure> {
    let tol = cli.tol;
    let mut checks = Vec::new();
    let close = |x: f64, y: f64, t: f64| (x - y).abs() <= t;
    let gate = match which {
        Construction::Kerr => kerr_cs_gate(std::f64::consts::PI),
        Construction::Deterministic => deterministic_ts_gate(),
        Construction::Heralded => heralded_ts_gate(cs_success)?,
        Construction::PostselectedCs => postselected_cs_gate(),
        Construction::NaiveChain => naive_chain_gate(),
        Construction::Fig6 => fig6_gate(&load_params(params_file)?)?,
    };
    let a: GateAnalysis = gate.analyze()?;
    let uniform = a.max_success - a.min_success;

    match which {
        Construction::Kerr => {
            checks.push(Check::new("controlled sign", a.flipped == [3] && a.residual <= tol, format!("residual {:.3e}", a.residual)));
        }
        Construction::Deterministic => {
            let t = gate.logical_transfer()?;
            let reference = circuit_unitary(&build_ts_circuit())?;
            let eq = equiv_up_to_global_phase(&t, reference.matrix(), tol)?;
            checks.push(Check::new(
                "matches qutrit circuit",
                eq.equivalent,
                format!("residual {:.3e}", eq.residual),
            ));
            checks.push(Check::new(
                "three Kerr interactions",
                gate.circuit.kerr_count() == 3,
                gate.circuit.kerr_count().to_string(),
            ));
        }
        Construction::Heralded => {
            let expected = cs_success * cs_success / 2.0;
            checks.push(Check::new(
                "success probability",
                close(a.success_probability, expected, tol),
                format!("expected {expected}"),
            ));
            checks.push(Check::new("flip on |001>", a.flipped == [1] && a.residual <= tol, format!("residual {:.3e}", a.residual)));
        }
        Construction::PostselectedCs => {
            checks.push(Check::new("success probability 1/9", close(a.success_probability, 1.0 / 9.0, tol), ""));
            checks.push(Check::new("controlled sign", a.flipped == [3] && a.residual <= tol, format!("residual {:.3e}", a.residual)));
        }
        Construction::NaiveChain => {
            checks.push(Check::new("success probability 1/162", close(a.success_probability, 1.0 / 162.0, tol), ""));
            checks.push(Check::new("single sign flip", a.flipped.len() == 1 && a.residual <= tol, format!("residual {:.3e}", a.residual)));
        }
        Construction::Fig6 => {
            checks.push(Check::new(
                "success probability 1/72",
                close(a.success_probability, 1.0 / 72.0, 1e-6),
                format!("deviation {:.3e}", a.success_probability - 1.0 / 72.0),
            ));
            checks.push(Check::new(
                "equal magnitudes, flip on |000>",
                a.flipped == [0] && a.residual <= 1e-8,
                format!("residual {:.3e}", a.residual),
            ));
        }
    }
    checks.push(Check::new(
        "input independent",
        uniform <= tol.max(1e-9),
        format!("spread {uniform:.3e}"),
    ));

    let passed = checks.iter().all(|c| c.passed);
    let record = SimulationRecord {
        construction: a.name.clone(),
        success_probability: a.success_probability,
        exact: if which == Construction::Fig6 {
            None
        } else {
            probability_text(a.success_probability, tol)
        },
        flipped: a.flipped.iter().map(|&i| digits(gate.output_layout.dims(), i)).collect(),
        pattern_residual: a.residual,
        herald_factor: a.herald_factor,
        min_success: a.min_success,
        max_success: a.max_success,
        kerr_interactions: gate.circuit.kerr_count(),
        checks,
        passed,
    };
    emit(cli, &record, || {
        let mut s = format!("{}\n", record.construction);
        s += &format!("  condition            {}\n", gate.condition);
        let p = match &record.exact {
            Some(q) => format!("{q} ({:.12})", record.success_probability),
            None => format!("{:.12}", record.success_probability),
        };
        s += &format!("  success probability  {p}\n");
        s += &format!("  flipped component    {}\n", record.flipped.join(", "));
        s += &format!("  pattern residual     {:.3e}\n", record.pattern_residual);
        for c in &record.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            s += &format!("  [{mark}] {} {}\n", c.name, c.detail);
        }
        s
    });
    verdict(passed)
}

fn solve(cli: &Cli, seed: u64, starts: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    let opts = SolveOptions {
        seed,
        starts,
        ..SolveOptions::default()
    };
    let solution = solve_fig6_reflectivities(&opts)?;
    let hits = solution.converged && (solution.success_probability - 1.0 / 72.0).abs() <= 1e-6;
    if let Some(path) = out {
        fs::write(path, solution.to_json() + "\n")?;
    }
    emit(cli, &solution, || {
        let p = &solution.params;
        format!(
            "three-photon gate solve (seed {seed}, {starts} starts, {} evaluations)\n\
             \x20 success probability  {:.12} (1/72 = {:.12})\n\
             \x20 amplitude error      {:.3e}\n\
             \x20 flipped              {:?}\n\
             \x20 orientations tried   {}\n\
             \x20 parameters           {:?}\n",
            solution.evaluations,
            solution.success_probability,
            1.0 / 72.0,
            solution.max_amplitude_error,
            solution.flipped,
            solution.orientations_tried,
            p.free(),
        )
    });
    verdict(hits)
}

#[derive(Debug, Serialize)]
struct CircuitRecord {
    dims: Vec<usize>,
    two_qudit_gates: usize,
    single_qudit_gates: usize,
    max_leakage: f64,
    flipped: Vec<String>,
    diagonal_residual: f64,
    is_toffoli_sign: bool,
}

fn circuit(cli: &Cli, file: &PathBuf) -> Result<(), Failure> {
    let circ = parse_circuit(&fs::read_to_string(file)?)?;
    let dims = circ.dims().dims().to_vec();
    let u = circuit_unitary(&circ)?;
    let block = qubit_block(circ.dims(), u.matrix());
    let mut residual = 0.0f64;
    let mut flipped = Vec::new();
    for i in 0..block.nrows() {
        for j in 0..block.ncols() {
            let v = block[(i, j)];
            let expected = if i != j {
                0.0
            } else if v.re < 0.0 {
                -1.0
            } else {
                1.0
            };
            residual = residual.max((v - expected).norm());
        }
        if block[(i, i)].re < 0.0 {
            flipped.push(bits(i, dims.len()));
        }
    }
    let leakage = max_leakage(&circ)?;
    let record = CircuitRecord {
        is_toffoli_sign: flipped.len() == 1 && residual <= cli.tol && leakage <= cli.tol,
        dims,
        two_qudit_gates: circ.two_qudit_gate_count(),
        single_qudit_gates: circ.single_qudit_gate_count(),
        max_leakage: leakage,
        flipped,
        diagonal_residual: residual,
    };
    emit(cli, &record, || {
        format!(
            "dims {:?}\n  two-qudit gates     {}\n  single-qudit gates  {}\n  \
             max leakage         {:.3e}\n  flipped             {}\n  \
             diagonal residual   {:.3e}\n  Toffoli-sign        {}\n",
            record.dims,
            record.two_qudit_gates,
            record.single_qudit_gates,
            record.max_leakage,
            record.flipped.join(", "),
            record.diagonal_residual,
            record.is_toffoli_sign
        )
    });
    verdict(record.is_toffoli_sign)
}

#[derive(Debug, Serialize)]
struct OpticalRecord {
    modes: usize,
    input: Vec<u8>,
    detection_probability: Option<f64>,
    herald_factor: f64,
    success_probability: f64,
    exact: Option<String>,
    output: Vec<(Vec<u8>, [f64; 2])>,
}

fn optical(cli: &Cli, file: &PathBuf) -> Result<(), Failure> {
    let program = parse_optical(&fs::read_to_string(file)?)?;
    let run = program.run()?;
    let shown = match &run.detection {
        Some(d) => d.state.clone(),
        None => run.output.clone(),
    };
    let record = OpticalRecord {
        modes: program.circuit.modes(),
        input: program.input.clone(),
        detection_probability: run.detection.as_ref().map(|d| d.probability),
        herald_factor: program.circuit.herald_factor(),
        success_probability: run.success_probability,
        exact: probability_text(run.success_probability, cli.tol),
        output: shown
            .terms(1e-12)
            .into_iter()
            .map(|(occ, a)| (occ.to_vec(), [a.re, a.im]))
            .collect(),
    };
    emit(cli, &record, || {
        let mut s = format!("{} modes, input {:?}\n", record.modes, record.input);
        if let Some(p) = record.detection_probability {
            s += &format!("  detection probability  {p:.12}\n");
        }
        let exact = record.exact.as_deref().map(|q| format!(" ({q})")).unwrap_or_default();
        s += &format!(
            "  success probability    {:.12}{exact}\n",
            record.success_probability
        );
        for (occ, [re, im]) in &record.output {
            s += &format!("  {occ:?}  {re:+.9} {im:+.9}i\n");
        }
        s
    });
    Ok(())
}
