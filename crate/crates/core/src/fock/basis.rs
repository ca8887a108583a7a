use std::collections::HashMap;

use crate::error::{Error, Result};

/// Photon occupation numbers, one entry per mode.
pub type Occupation = Vec<u8>;

/// All occupations of `modes` modes holding exactly `photons` photons.
///
/// States are listed in descending lexicographic order: `[N,0,..,0]` first,
/// `[0,..,0,N]` last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    modes: usize,
    photons: usize,
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl FockBasis {
    pub fn new(modes: usize, photons: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter("a Fock basis needs at least one mode".into()));
        }
        if photons > u8::MAX as usize {
            return Err(Error::InvalidParameter(format!("{photons} photons is too many")));
        }
        let mut states = Vec::new();
        let mut current = vec![0u8; modes];
        fill(&mut states, &mut current, 0, photons);
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            modes,
            photons,
            states,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &Occupation {
        &self.states[i]
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Index of `occupation`, or an error naming what is wrong with it.
    pub fn require_index(&self, occupation: &[u8]) -> Result<usize> {
        if occupation.len() != self.modes {
            return Err(Error::LengthMismatch {
                expected: self.modes,
                got: occupation.len(),
            });
        }
        let total: usize = occupation.iter().map(|&n| n as usize).sum();
        if total != self.photons {
            return Err(Error::PhotonNumberMismatch {
                input: total,
                output: self.photons,
            });
        }
        Ok(self.index[occupation])
    }
}

fn fill(out: &mut Vec<Occupation>, current: &mut Occupation, mode: usize, left: usize) {
    if mode + 1 == current.len() {
        current[mode] = left as u8;
        out.push(current.clone());
        return;
    }
    for n in (0..=left).rev() {
        current[mode] = n as u8;
        fill(out, current, mode + 1, left - n);
    }
    current[mode] = 0;
}

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_stars_and_bars() {
        for m in 1..8 {
            for n in 0..5 {
                let b = FockBasis::new(m, n).unwrap();
                assert_eq!(b.len(), binomial(n + m - 1, n), "m={m} n={n}");
            }
        }
        assert_eq!(FockBasis::new(11, 3).unwrap().len(), 286);
    }

    #[test]
    fn descending_lexicographic_order() {
        let b = FockBasis::new(3, 2).unwrap();
        let expected: Vec<Occupation> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 2, 0],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(b.states(), expected.as_slice());
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
        }
    }

    #[test]
    fn require_index_errors() {
        let b = FockBasis::new(3, 2).unwrap();
        assert!(b.require_index(&[1, 1]).is_err());
        assert!(b.require_index(&[1, 1, 1]).is_err());
        assert_eq!(b.require_index(&[0, 1, 1]).unwrap(), 4);
    }
}
