//! Signatures of periodic subvarieties: constant coordinates plus ordered chains.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `J_V` (constant coordinates) and the ordered chains partitioning the rest of `{1..n}`.
/// Indices are 1-based, matching the variable names `x1..xn`. Chains are stored in
/// lexicographic order, which makes equality the same as equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub n: usize,
    pub constants: Vec<usize>,
    pub chains: Vec<Vec<usize>>,
}

impl Signature {
    pub fn new(n: usize, mut constants: Vec<usize>, mut chains: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for &i in constants.iter().chain(chains.iter().flatten()) {
            if i == 0 || i > n || seen[i] {
                return Err(Error::invalid(format!(
                    "signature indices must partition 1..{n}; offending index {i}"
                )));
            }
            seen[i] = true;
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::invalid(format!("signature does not cover 1..{n}")));
        }
        if chains.iter().any(|c| c.is_empty()) {
            return Err(Error::invalid("signature chains must be nonempty"));
        }
        constants.sort_unstable();
        chains.sort();
        Ok(Signature { n, constants, chains })
    }

    /// Dimension of the periodic subvarieties with this signature.
    pub fn dim(&self) -> usize {
        self.chains.len()
    }

    pub fn codim(&self) -> usize {
        self.n - self.dim()
    }

    /// Last index of every chain: the coordinates of largest canonical height on `V`.
    pub fn tops(&self) -> Vec<usize> {
        self.chains.iter().map(|c| *c.last().unwrap()).collect()
    }

    /// The indices outside the chain tops (constant and dominated coordinates), sorted.
    pub fn dominated(&self) -> Vec<usize> {
        let tops = self.tops();
        (1..=self.n).filter(|i| !tops.contains(i)).collect()
    }

    pub fn all_chains_trivial(&self) -> bool {
        self.chains.iter().all(|c| c.len() == 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j: Vec<String> = self.constants.iter().map(|i| i.to_string()).collect();
        write!(f, "J={{{}}}", j.join(","))?;
        for c in &self.chains {
            let c: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, " ({})", c.join(","))?;
        }
        Ok(())
    }
}

/// All signatures of periodic subvarieties of `(P^1)^n` of codimension `codim`: a set of
/// constant coordinates and an unordered family of `n - codim` nonempty ordered chains.
pub fn enumerate_signatures(n: usize, codim: usize) -> Vec<Signature> {
    assert!(codim <= n, "codimension exceeds the ambient dimension");
    let k = n - codim;
    let mut out = Vec::new();
    let mut constants = Vec::new();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    grow(1, n, k, &mut constants, &mut chains, &mut out);
    out.sort();
    out
}

// Elements are placed in increasing order: as a constant, as the first element of a new
// chain, or at any position of an existing chain. Each configuration arises exactly once.
fn grow(
    i: usize,
    n: usize,
    k: usize,
    constants: &mut Vec<usize>,
    chains: &mut Vec<Vec<usize>>,
    out: &mut Vec<Signature>,
) {
    if i > n {
        if chains.len() == k {
            out.push(Signature::new(n, constants.clone(), chains.clone()).expect("valid by construction"));
        }
        return;
    }
    // not enough elements left to open the missing chains
    if chains.len() + (n - i + 1) < k {
        return;
    }
    constants.push(i);
    grow(i + 1, n, k, constants, chains, out);
    constants.pop();
    if chains.len() < k {
        chains.push(vec![i]);
        grow(i + 1, n, k, constants, chains, out);
        chains.pop();
    }
    for c in 0..chains.len() {
        for pos in 0..=chains[c].len() {
            chains[c].insert(pos, i);
            grow(i + 1, n, k, constants, chains, out);
            chains[c].remove(pos);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_curves() {
        let s = enumerate_signatures(2, 1);
        let expect = vec![
            Signature::new(2, vec![], vec![vec![1, 2]]).unwrap(),
            Signature::new(2, vec![], vec![vec![2, 1]]).unwrap(),
            Signature::new(2, vec![1], vec![vec![2]]).unwrap(),
            Signature::new(2, vec![2], vec![vec![1]]).unwrap(),
        ];
        assert_eq!(s.len(), 4);
        for e in &expect {
            assert!(s.contains(e), "{e}");
        }
    }

    #[test]
    fn edge_cases() {
        assert_eq!(enumerate_signatures(1, 0), vec![Signature::new(1, vec![], vec![vec![1]]).unwrap()]);
        assert_eq!(enumerate_signatures(3, 3), vec![Signature::new(3, vec![1, 2, 3], vec![]).unwrap()]);
        assert_eq!(enumerate_signatures(0, 0).len(), 1);
    }

    #[test]
    fn validation() {
        assert!(Signature::new(2, vec![1], vec![vec![1]]).is_err());
        assert!(Signature::new(3, vec![1], vec![vec![2]]).is_err());
        let s = Signature::new(3, vec![], vec![vec![3], vec![2, 1]]).unwrap();
        assert_eq!(s.chains, vec![vec![2, 1], vec![3]]);
        assert_eq!(s.tops(), vec![1, 3]);
        assert_eq!(s.dominated(), vec![2]);
    }
}
