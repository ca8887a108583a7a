use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qudit::GateMatrix;
use crate::C64;

/// Gates available to the qudit Toffoli constructions.
///
/// Two-wire gates take the control first. `CS` and `CNOT` only touch the
/// `{0,1} x {0,1}` block; any target level >= 2 passes through unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGate {
    /// Swap of levels 0 and 2.
    XA,
    /// Swap of levels 1 and 3.
    XB,
    LevelSwap(usize, usize),
    /// Hadamard on levels {0,1}, identity on higher levels.
    H,
    CS,
    CNOT,
}

impl NamedGate {
    pub fn arity(&self) -> usize {
        match self {
            NamedGate::CS | NamedGate::CNOT => 2,
            _ => 1,
        }
    }

    /// The matrix this gate has on wires with the given dimensions.
    pub fn matrix(&self, wire_dims: &[usize]) -> Result<GateMatrix> {
        if wire_dims.len() != self.arity() {
            return Err(Error::InvalidGate(format!(
                "{self} acts on {} wires, got dims {wire_dims:?}",
                self.arity()
            )));
        }
        match *self {
            NamedGate::XA => gate_xa(wire_dims[0]),
            NamedGate::XB => gate_xb(wire_dims[0]),
            NamedGate::LevelSwap(j, k) => gate_level_swap(j, k, wire_dims[0]),
            NamedGate::H => gate_hadamard(wire_dims[0]),
            NamedGate::CS => gate_cs_embedded(wire_dims[0], wire_dims[1]),
            NamedGate::CNOT => gate_cnot_embedded(wire_dims[0], wire_dims[1]),
        }
    }

    /// Highest level reached by a level-changing single-wire gate.
    pub fn max_level(&self) -> Option<usize> {
        match *self {
            NamedGate::XA => Some(2),
            NamedGate::XB => Some(3),
            NamedGate::LevelSwap(j, k) => Some(j.max(k)),
            _ => None,
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGate::XA => write!(f, "XA"),
            NamedGate::XB => write!(f, "XB"),
            NamedGate::LevelSwap(j, k) => write!(f, "LEVELSWAP({j},{k})"),
            NamedGate::H => write!(f, "H"),
            NamedGate::CS => write!(f, "CS"),
            NamedGate::CNOT => write!(f, "CNOT"),
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidGate(format!("dimension {d} is below 2")))
    } else {
        Ok(())
    }
}

/// Transposition of levels `j` and `k` on a `d`-level wire.
pub fn gate_level_swap(j: usize, k: usize, d: usize) -> Result<GateMatrix> {
    check_dim(d)?;
    if j == k || j >= d || k >= d {
        return Err(Error::InvalidGate(format!(
            "level swap ({j},{k}) needs two distinct levels below {d}"
        )));
    }
    let mut perm: Vec<usize> = (0..d).collect();
    perm.swap(j, k);
    GateMatrix::permutation(vec![d], &perm)
}

pub fn gate_xa(d: usize) -> Result<GateMatrix> {
    if d < 3 {
        return Err(Error::InvalidGate(format!("XA needs d >= 3, got {d}")));
    }
    gate_level_swap(0, 2, d)
}

pub fn gate_xb(d: usize) -> Result<GateMatrix> {
    if d < 4 {
        return Err(Error::InvalidGate(format!("XB needs d >= 4, got {d}")));
    }
    gate_level_swap(1, 3, d)
}

/// Hadamard on levels {0,1} padded with identity.
pub fn gate_hadamard(d: usize) -> Result<GateMatrix> {
    check_dim(d)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::<C64>::identity(d, d);
    m[(0, 0)] = C64::new(s, 0.0);
    m[(0, 1)] = C64::new(s, 0.0);
    m[(1, 0)] = C64::new(s, 0.0);
    m[(1, 1)] = C64::new(-s, 0.0);
    GateMatrix::new(vec![d], m)
}

/// Controlled sign: -1 on `|1>_c|1>_t`, +1 everywhere else.
pub fn gate_cs_embedded(dc: usize, dt: usize) -> Result<GateMatrix> {
    check_dim(dc)?;
    check_dim(dt)?;
    let mut diag = vec![C64::new(1.0, 0.0); dc * dt];
    diag[dt + 1] = C64::new(-1.0, 0.0);
    GateMatrix::diagonal(vec![dc, dt], &diag)
}

/// Controlled NOT: swaps target levels 0 and 1 when the control is at level 1.
pub fn gate_cnot_embedded(dc: usize, dt: usize) -> Result<GateMatrix> {
    check_dim(dc)?;
    check_dim(dt)?;
    let mut perm: Vec<usize> = (0..dc * dt).collect();
    perm.swap(dt, dt + 1);
    GateMatrix::permutation(vec![dc, dt], &perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{max_abs_diff, PureState, WireDims};

    fn ket(d: usize, level: usize) -> PureState {
        PureState::basis(WireDims::new(vec![d]).unwrap(), &[level]).unwrap()
    }

    fn ket2(dc: usize, dt: usize, c: usize, t: usize) -> PureState {
        PureState::basis(WireDims::new(vec![dc, dt]).unwrap(), &[c, t]).unwrap()
    }

    #[test]
    fn xa_action() {
        let xa = gate_xa(3).unwrap();
        assert_eq!(ket(3, 0).apply_gate(&xa, &[0]).unwrap(), ket(3, 2));
        assert_eq!(ket(3, 2).apply_gate(&xa, &[0]).unwrap(), ket(3, 0));
        assert_eq!(ket(3, 1).apply_gate(&xa, &[0]).unwrap(), ket(3, 1));
        let sq = xa.compose(&xa).unwrap();
        assert_eq!(sq.matrix(), &DMatrix::identity(3, 3));
        assert!(gate_xa(2).is_err());
    }

    #[test]
    fn level_swap_examples() {
        let xb = gate_level_swap(1, 3, 4).unwrap();
        assert_eq!(ket(4, 1).apply_gate(&xb, &[0]).unwrap(), ket(4, 3));
        assert_eq!(xb, gate_xb(4).unwrap());
        assert_eq!(gate_level_swap(0, 2, 3).unwrap(), gate_xa(3).unwrap());
        for d in 2..6 {
            for j in 0..d {
                for k in 0..d {
                    if j == k {
                        assert!(gate_level_swap(j, k, d).is_err());
                        continue;
                    }
                    let g = gate_level_swap(j, k, d).unwrap();
                    assert_eq!(g.compose(&g).unwrap().matrix(), &DMatrix::identity(d, d));
                }
            }
        }
        assert!(gate_level_swap(0, 4, 4).is_err());
        assert!(gate_xb(3).is_err());
    }

    #[test]
    fn cs_examples() {
        let cs = gate_cs_embedded(2, 2).unwrap();
        let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(
            [1.0, 1.0, 1.0, -1.0].map(|x| C64::new(x, 0.0)).to_vec(),
        ));
        assert_eq!(cs.matrix(), &expected);

        let cs3 = gate_cs_embedded(2, 3).unwrap();
        assert_eq!(ket2(2, 3, 1, 2).apply_gate(&cs3, &[0, 1]).unwrap(), ket2(2, 3, 1, 2));
        let out = ket2(2, 3, 1, 1).apply_gate(&cs3, &[0, 1]).unwrap();
        assert_eq!(out.amplitude(&[1, 1]).unwrap(), C64::new(-1.0, 0.0));
    }

    #[test]
    fn cnot_examples() {
        let cx = gate_cnot_embedded(2, 3).unwrap();
        assert_eq!(ket2(2, 3, 1, 0).apply_gate(&cx, &[0, 1]).unwrap(), ket2(2, 3, 1, 1));
        assert_eq!(ket2(2, 3, 1, 2).apply_gate(&cx, &[0, 1]).unwrap(), ket2(2, 3, 1, 2));
        assert_eq!(ket2(2, 3, 0, 1).apply_gate(&cx, &[0, 1]).unwrap(), ket2(2, 3, 0, 1));
    }

    #[test]
    fn cnot_is_hadamard_conjugated_cs() {
        for dt in 2..5 {
            let dims = WireDims::new(vec![2, dt]).unwrap();
            let h = gate_hadamard(dt).unwrap().embed(&dims, &[1]).unwrap();
            let cs = gate_cs_embedded(2, dt).unwrap().into_matrix();
            let built = &h * cs * &h;
            let cx = gate_cnot_embedded(2, dt).unwrap().into_matrix();
            assert!(max_abs_diff(&built, &cx) < 1e-15);
        }
    }

    #[test]
    fn display_round_trips_through_names() {
        assert_eq!(NamedGate::LevelSwap(1, 3).to_string(), "LEVELSWAP(1,3)");
        assert_eq!(NamedGate::CNOT.to_string(), "CNOT");
    }
}
