//! Finite-dimensional Z-graded vector spaces and basis bookkeeping.
//!
//! Basis vectors are indexed by `(degree, index)` pairs; degrees of basis
//! vectors are always attached to indices, never inferred.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A basis vector of a graded space: its homological degree and its position
/// within that degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub degree: i64,
    pub index: usize,
}

impl BasisIndex {
    pub fn new(degree: i64, index: usize) -> Self {
        BasisIndex { degree, index }
    }
}

/// A basis element of a tensor power, one factor per slot.
pub type MultiIndex = Vec<BasisIndex>;

pub fn multi_degree(m: &[BasisIndex]) -> i64 {
    m.iter().map(|b| b.degree).sum()
}

/// A finite map from integer degree to dimension; only nonzero entries stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedSpace {
    dims: BTreeMap<i64, usize>,
}

impl GradedSpace {
    pub fn new() -> Self {
        GradedSpace::default()
    }

    pub fn from_dims(dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut m = BTreeMap::new();
        for (d, n) in dims {
            if n > 0 {
                *m.entry(d).or_insert(0) += n;
            }
        }
        GradedSpace { dims: m }
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn dims(&self) -> &BTreeMap<i64, usize> {
        &self.dims
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }

    pub fn contains(&self, b: BasisIndex) -> bool {
        b.index < self.dim(b.degree)
    }

    /// All basis indices, ordered by (degree, index).
    pub fn basis(&self) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(self.total_dim());
        for (&d, &n) in &self.dims {
            for i in 0..n {
                out.push(BasisIndex::new(d, i));
            }
        }
        out
    }

    /// All multi-indices of the n-th tensor power, in lexicographic order.
    pub fn tensor_basis(&self, n: usize) -> Vec<MultiIndex> {
        let single = self.basis();
        let mut out: Vec<MultiIndex> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * single.len());
            for m in &out {
                for &b in &single {
                    let mut m2 = m.clone();
                    m2.push(b);
                    next.push(m2);
                }
            }
            out = next;
        }
        out
    }

    /// Direct sum, returning the block offsets of `other` per degree.
    pub fn direct_sum(&self, other: &GradedSpace) -> (GradedSpace, BTreeMap<i64, usize>) {
        let mut dims = self.dims.clone();
        let mut offsets = BTreeMap::new();
        for (&d, &n) in &other.dims {
            let off = dims.get(&d).copied().unwrap_or(0);
            offsets.insert(d, off);
            *dims.entry(d).or_insert(0) += n;
        }
        (GradedSpace { dims }, offsets)
    }

    pub fn check_multi_index(&self, m: &[BasisIndex]) -> Result<()> {
        for b in m {
            if !self.contains(*b) {
                return Err(Error::argument(format!(
                    "basis index ({},{}) out of range",
                    b.degree, b.index
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_enumeration() {
        let v = GradedSpace::from_dims([(0, 2), (1, 1), (3, 0)]);
        assert_eq!(v.total_dim(), 3);
        assert_eq!(v.dim(3), 0);
        assert_eq!(v.basis().len(), 3);
        assert_eq!(v.tensor_basis(2).len(), 9);
        assert_eq!(v.tensor_basis(0), vec![Vec::<BasisIndex>::new()]);
    }

    #[test]
    fn sum_offsets() {
        let v = GradedSpace::from_dims([(0, 2)]);
        let w = GradedSpace::from_dims([(0, 1), (1, 2)]);
        let (s, off) = v.direct_sum(&w);
        assert_eq!(s.dim(0), 3);
        assert_eq!(s.dim(1), 2);
        assert_eq!(off[&0], 2);
        assert_eq!(off[&1], 0);
    }
}
