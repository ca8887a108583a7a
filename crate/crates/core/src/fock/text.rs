//! Line-oriented optical circuit files.
//!
//! ```text
//! # Hong-Ou-Mandel
//! modes 2
//! input 1 1
//! bs 1/2 0 1
//! detect 1 1
//! ```
//!
//! `#` starts a comment. Directives:
//!
//! - `modes M` must come first.
//! - `input n0 n1 ...` gives the input occupation; `photons N` may be given
//!   as a consistency check.
//! - `bs R a b [dotted=a|b]`, `atten T mode ancilla [dotted=mode|ancilla]`
//!   (dotted side defaults to the second mode).
//! - `pbs h1 v1 h2 v2`, `hwp DEGREES h v`, `phase PHI mode`,
//!   `kerr CHI a b`, `cs SUCCESS a b` (heralded controlled sign).
//! - `detect c0 c1 ...` with one entry per mode: a count or `*`.
//!
//! Numbers accept fractions and `pi`, e.g. `1/3`, `pi/2`, `0.25*pi`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{
    DetectionPattern, DottedSide, ModeCondition, Occupation, OpticalCircuit, OpticalElement,
    OpticalState, PostselectOutcome,
};
use crate::error::{Error, Result};

/// A parsed optical circuit file.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalProgram {
    pub circuit: OpticalCircuit,
    pub input: Occupation,
    pub detect: Option<DetectionPattern>,
}

/// Outcome of running an [`OpticalProgram`].
#[derive(Debug, Clone)]
pub struct ProgramRun {
    pub output: OpticalState,
    pub detection: Option<PostselectOutcome>,
    /// Detection probability times the herald factor of heralded elements.
    pub success_probability: f64,
}

impl OpticalProgram {
    pub fn run(&self) -> Result<ProgramRun> {
        let input = OpticalState::from_occupation(&self.input)?;
        let output = self.circuit.apply(&input)?;
        let detection = match &self.detect {
            Some(p) => Some(output.postselect(p)?),
            None => None,
        };
        let p = detection.as_ref().map_or(1.0, |d| d.probability);
        Ok(ProgramRun {
            success_probability: p * self.circuit.herald_factor(),
            output,
            detection,
        })
    }
}

pub fn parse_number(token: &str) -> Option<f64> {
    let product = |s: &str| -> Option<f64> {
        s.split('*').try_fold(1.0, |acc, f| {
            let f = f.trim();
            let v = if f.eq_ignore_ascii_case("pi") {
                PI
            } else {
                f.parse::<f64>().ok()?
            };
            Some(acc * v)
        })
    };
    let mut parts = token.splitn(2, '/');
    let num = product(parts.next()?)?;
    let value = match parts.next() {
        Some(den) => num / product(den)?,
        None => num,
    };
    value.is_finite().then_some(value)
}

pub fn parse_optical(text: &str) -> Result<OpticalProgram> {
    let mut circuit: Option<OpticalCircuit> = None;
    let mut photons: Option<(usize, usize)> = None;
    let mut input: Option<Occupation> = None;
    let mut detect = None;

    for (number, raw) in text.lines().enumerate() {
        let line_no = number + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let head = tokens[0].to_ascii_lowercase();
        let args = &tokens[1..];
        let err = |m: String| Error::parse(line_no, m);

        if head == "modes" {
            if circuit.is_some() {
                return Err(err("duplicate `modes` directive".into()));
            }
            let [m] = uints(line_no, args)?[..] else {
                return Err(err("`modes` takes one count".into()));
            };
            if m == 0 {
                return Err(err("need at least one mode".into()));
            }
            circuit = Some(OpticalCircuit::new(m));
            continue;
        }
        let circ = circuit
            .as_mut()
            .ok_or_else(|| err("expected `modes` before anything else".into()))?;
        let m = circ.modes();

        match head.as_str() {
            "photons" => {
                let [n] = uints(line_no, args)?[..] else {
                    return Err(err("`photons` takes one count".into()));
                };
                photons = Some((n, line_no));
            }
            "input" => {
                let occ = uints(line_no, args)?;
                if occ.len() != m {
                    return Err(err(format!("`input` needs {m} occupations, got {}", occ.len())));
                }
                let occ: Option<Occupation> = occ.iter().map(|&n| u8::try_from(n).ok()).collect();
                input = Some(occ.ok_or_else(|| err("occupation too large".into()))?);
            }
            "detect" => {
                if args.len() != m {
                    return Err(err(format!("`detect` needs {m} entries, got {}", args.len())));
                }
                let mut conds = Vec::with_capacity(m);
                for a in args {
                    conds.push(if *a == "*" {
                        ModeCondition::Any
                    } else {
                        ModeCondition::Exactly(
                            a.parse().map_err(|_| err(format!("bad count `{a}`")))?,
                        )
                    });
                }
                detect = Some(DetectionPattern::new(conds));
            }
            _ => {
                let element = parse_element(line_no, &head, args)?;
                circ.push(element).map_err(|e| err(e.to_string()))?;
            }
        }
    }

    let circuit = circuit.ok_or_else(|| Error::parse(0, "missing `modes` directive"))?;
    let input = input.ok_or_else(|| Error::parse(0, "missing `input` directive"))?;
    let total: usize = input.iter().map(|&n| n as usize).sum();
    if let Some((n, line_no)) = photons {
        if n != total {
            return Err(Error::parse(
                line_no,
                format!("`photons {n}` but the input holds {total}"),
            ));
        }
    }
    Ok(OpticalProgram {
        circuit,
        input,
        detect,
    })
}

fn uints(line_no: usize, args: &[&str]) -> Result<Vec<usize>> {
    args.iter()
        .map(|a| {
            a.parse()
                .map_err(|_| Error::parse(line_no, format!("expected an integer, got `{a}`")))
        })
        .collect()
}

fn parse_element(line_no: usize, head: &str, args: &[&str]) -> Result<OpticalElement> {
    let err = |m: String| Error::parse(line_no, m);
    let (dotted, args): (Option<&str>, Vec<&str>) = {
        let mut d = None;
        let mut rest = Vec::new();
        for a in args {
            match a.strip_prefix("dotted=") {
                Some(v) => d = Some(v),
                None => rest.push(*a),
            }
        }
        (d, rest)
    };
    let number = |s: &str| parse_number(s).ok_or_else(|| err(format!("bad number `{s}`")));
    let modes = |s: &[&str], k: usize| -> Result<Vec<usize>> {
        if s.len() != k {
            return Err(err(format!("`{head}` expects {k} mode indices")));
        }
        uints(line_no, s)
    };
    let side = |a: usize, b: usize| -> Result<DottedSide> {
        match dotted {
            None => Ok(DottedSide::Second),
            Some(v) if v.parse() == Ok(a) => Ok(DottedSide::First),
            Some(v) if v.parse() == Ok(b) => Ok(DottedSide::Second),
            Some(v) => Err(err(format!("dotted side `{v}` is not one of {a}, {b}"))),
        }
    };
    if dotted.is_some() && !matches!(head, "bs" | "atten") {
        return Err(err(format!("`{head}` has no dotted side")));
    }
    if head == "pbs" {
        let m = modes(&args, 4)?;
        return Ok(OpticalElement::PolarizingBeamSplitter {
            path_a: (m[0], m[1]),
            path_b: (m[2], m[3]),
        });
    }
    let Some((value, rest)) = args.split_first() else {
        return Err(err(format!("`{head}` needs a parameter")));
    };
    let value = number(value)?;
    Ok(match head {
        "bs" => {
            let m = modes(rest, 2)?;
            OpticalElement::BeamSplitter {
                modes: (m[0], m[1]),
                reflectivity: value,
                dotted: side(m[0], m[1])?,
            }
        }
        "atten" => {
            let m = modes(rest, 2)?;
            OpticalElement::Attenuator {
                mode: m[0],
                ancilla: m[1],
                transmission: value,
                dotted: side(m[0], m[1])?,
            }
        }
        "hwp" => {
            let m = modes(rest, 2)?;
            OpticalElement::hwp_degrees(m[0], m[1], value)
        }
        "phase" => OpticalElement::PhaseShift {
            mode: modes(rest, 1)?[0],
            phi: value,
        },
        "kerr" => {
            let m = modes(rest, 2)?;
            OpticalElement::CrossKerr {
                modes: (m[0], m[1]),
                chi: value,
            }
        }
        "cs" => {
            let m = modes(rest, 2)?;
            OpticalElement::HeraldedCs {
                modes: (m[0], m[1]),
                success: value,
            }
        }
        other => return Err(err(format!("unknown directive `{other}`"))),
    })
}

pub fn write_optical(program: &OpticalProgram) -> String {
    let mut out = format!("modes {}\n", program.circuit.modes());
    let occ: Vec<String> = program.input.iter().map(u8::to_string).collect();
    let _ = writeln!(out, "input {}", occ.join(" "));
    for e in program.circuit.elements() {
        let _ = writeln!(out, "{e}");
    }
    if let Some(p) = &program.detect {
        let entries: Vec<String> = p
            .conditions()
            .iter()
            .map(|c| match c {
                ModeCondition::Any => "*".into(),
                ModeCondition::Exactly(n) => n.to_string(),
            })
            .collect();
        let _ = writeln!(out, "detect {}", entries.join(" "));
    }
    out
}
