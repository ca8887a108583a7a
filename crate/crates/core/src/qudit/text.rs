//! Line-oriented circuit files.
//!
//! ```text
//! # Toffoli-sign gate on two qubits and a qutrit
//! dims 2 2 3
//! XA 2
//! CNOT 1 2
//! CS 0 2
//! CNOT 1 2
//! XA 2
//! ```
//!
//! Blank lines and everything after `#` are ignored. The first directive must
//! be `dims` followed by one dimension per wire (wire 0 first). Every other
//! line is a step: a gate name, an optional parenthesized comma-separated
//! parameter list with no spaces, then the target wires. Gate names are case
//! insensitive: `XA`, `XB`, `LEVELSWAP(j,k)`, `H`, `CS`, `CNOT` (control
//! first, target second).

use super::{CircuitDescription, WireDims};
use crate::error::{Error, Result};
use crate::toffoli::NamedGate;

pub fn parse_circuit(text: &str) -> Result<CircuitDescription> {
    let mut circuit: Option<CircuitDescription> = None;
    for (number, raw) in text.lines().enumerate() {
        let line_no = number + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let rest: Vec<&str> = tokens.collect();

        if head.eq_ignore_ascii_case("dims") {
            if circuit.is_some() {
                return Err(Error::parse(line_no, "duplicate `dims` directive"));
            }
            let dims = parse_usizes(line_no, &rest)?;
            if dims.is_empty() {
                return Err(Error::parse(line_no, "`dims` needs at least one wire"));
            }
            let dims = WireDims::new(dims).map_err(|e| Error::parse(line_no, e.to_string()))?;
            circuit = Some(CircuitDescription::new(dims));
            continue;
        }

        let circ = circuit
            .as_mut()
            .ok_or_else(|| Error::parse(line_no, "expected `dims` before the first gate"))?;
        let gate = parse_gate(line_no, head)?;
        let wires = parse_usizes(line_no, &rest)?;
        circ.push(gate, &wires)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    circuit.ok_or_else(|| Error::parse(0, "missing `dims` directive"))
}

pub fn write_circuit(circ: &CircuitDescription) -> String {
    let mut out = String::from("dims");
    for d in circ.dims().dims() {
        out.push_str(&format!(" {d}"));
    }
    out.push('\n');
    for step in circ.steps() {
        out.push_str(&step.gate.to_string());
        for w in &step.wires {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
    }
    out
}

fn parse_usizes(line: usize, tokens: &[&str]) -> Result<Vec<usize>> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got `{t}`")))
        })
        .collect()
}

fn parse_gate(line: usize, token: &str) -> Result<NamedGate> {
    let (name, params) = match token.find('(') {
        Some(open) => {
            let close = token
                .strip_suffix(')')
                .ok_or_else(|| Error::parse(line, format!("unclosed parameter list in `{token}`")))?;
            let inner = &close[open + 1..];
            let params = if inner.is_empty() {
                Vec::new()
            } else {
                parse_usizes(line, &inner.split(',').map(str::trim).collect::<Vec<_>>())?
            };
            (&token[..open], params)
        }
        None => (token, Vec::new()),
    };
    let upper = name.to_ascii_uppercase();
    let expect_params = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::parse(
                line,
                format!("gate {upper} takes {n} parameters, got {}", params.len()),
            ))
        }
    };
    let gate = match upper.as_str() {
        "XA" => NamedGate::XA,
        "XB" => NamedGate::XB,
        "H" => NamedGate::H,
        "CS" => NamedGate::CS,
        "CNOT" => NamedGate::CNOT,
        "LEVELSWAP" => {
            expect_params(2)?;
            NamedGate::LevelSwap(params[0], params[1])
        }
        _ => return Err(Error::parse(line, format!("unknown gate `{name}`"))),
    };
    if !matches!(gate, NamedGate::LevelSwap(..)) {
        expect_params(0)?;
    }
    Ok(gate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toffoli::build_ts_circuit;

    #[test]
    fn parses_two_control_file() {
        let text = "# T-S\n dims 2 2 3\nXA 2\ncnot 1 2  # comment\nCS 0 2\nCNOT 1 2\nXA 2\n";
        let circ = parse_circuit(text).unwrap();
        assert_eq!(circ, build_ts_circuit());
    }

    #[test]
    fn write_then_parse() {
        let circ = crate::toffoli::build_n_ts_circuit(4).unwrap();
        assert_eq!(parse_circuit(&write_circuit(&circ)).unwrap(), circ);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_circuit("dims 2 2 3\n\nFOO 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_circuit("XA 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_circuit("dims 2 2\nXA 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_circuit("dims 2 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_circuit("dims 2 4\nLEVELSWAP(1) 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_circuit("dims 2 4\nCS 0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_circuit("# nothing\n").is_err());
    }
}
