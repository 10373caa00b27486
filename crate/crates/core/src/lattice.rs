//! Finite meet-semilattices with a zero, given by their meet table.
//!
//! Element `0` is always the zero. The natural order is `e <= f` iff
//! `e ∧ f = e`, and two elements are orthogonal when their meet is zero.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element inside a [`FiniteSemilattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    pub const ZERO: ElementId = ElementId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("meet table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry meet({row},{col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("meet({0},{0}) != {0}")]
    NotIdempotent(ElementId),
    #[error("meet({0},{1}) != meet({1},{0})")]
    NotCommutative(ElementId, ElementId),
    #[error("meet is not associative on ({0},{1},{2})")]
    NotAssociative(ElementId, ElementId, ElementId),
    #[error("zero is not absorbing: meet(0,{0}) != 0")]
    ZeroNotAbsorbing(ElementId),
}

/// A validated finite semilattice with zero at index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSemilattice {
    size: usize,
    meet: Vec<usize>,
}

impl FiniteSemilattice {
    /// Validates a raw meet table. Each failure names the first offending
    /// tuple in lexicographic order.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, LatticeError> {
        let n = table.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut meet = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(LatticeError::Ragged { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(LatticeError::OutOfRange { row, col, value });
                }
                meet.push(value);
            }
        }
        let lattice = FiniteSemilattice { size: n, meet };
        lattice.check_axioms()?;
        Ok(lattice)
    }

    fn check_axioms(&self) -> Result<(), LatticeError> {
        let n = self.size;
        let m = |a: usize, b: usize| self.meet[a * n + b];
        for e in 0..n {
            if m(e, e) != e {
                return Err(LatticeError::NotIdempotent(ElementId(e)));
            }
        }
        for e in 0..n {
            for f in e + 1..n {
                if m(e, f) != m(f, e) {
                    return Err(LatticeError::NotCommutative(ElementId(e), ElementId(f)));
                }
            }
        }
        for e in 0..n {
            if m(0, e) != 0 {
                return Err(LatticeError::ZeroNotAbsorbing(ElementId(e)));
            }
        }
        for e in 0..n {
            for f in 0..n {
                let ef = m(e, f);
                for g in 0..n {
                    if m(ef, g) != m(e, m(f, g)) {
                        return Err(LatticeError::NotAssociative(
                            ElementId(e),
                            ElementId(f),
                            ElementId(g),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1, "a chain needs at least the zero");
        let table: Vec<Vec<usize>> =
            (0..n).map(|e| (0..n).map(|f| e.min(f)).collect()).collect();
        FiniteSemilattice::from_table(&table).expect("chains are semilattices")
    }

    /// Builds the meet table of a family of sets closed under intersection,
    /// with the empty set playing the role of zero. `sets[0]` must be empty.
    pub fn from_intersection_family(sets: &[u64]) -> Result<Self, LatticeError> {
        let n = sets.len();
        let mut table = vec![vec![0; n]; n];
        for (e, &a) in sets.iter().enumerate() {
            for (f, &b) in sets.iter().enumerate() {
                let meet = a & b;
                table[e][f] = sets.iter().position(|&s| s == meet).unwrap_or(n);
            }
        }
        FiniteSemilattice::from_table(&table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.size).map(ElementId)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (1..self.size).map(ElementId)
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.0 < self.size
    }

    #[inline]
    pub fn meet(&self, e: ElementId, f: ElementId) -> ElementId {
        ElementId(self.meet[e.0 * self.size + f.0])
    }

    /// The raw table, row `e` holding `meet(e, ·)`.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.meet.chunks(self.size).map(|row| row.to_vec()).collect()
    }

    #[inline]
    pub fn leq(&self, e: ElementId, f: ElementId) -> bool {
        self.meet(e, f) == e
    }

    #[inline]
    pub fn orthogonal(&self, e: ElementId, f: ElementId) -> bool {
        self.meet(e, f).is_zero()
    }

    /// First pair `(e, f)`, `e < f` by index, that is neither orthogonal nor
    /// comparable. `None` means the semilattice is tree-like.
    pub fn tree_like_counterexample(&self) -> Option<(ElementId, ElementId)> {
        for e in self.elements() {
            for f in (e.0 + 1..self.size).map(ElementId) {
                if !(self.orthogonal(e, f) || self.leq(e, f) || self.leq(f, e)) {
                    return Some((e, f));
                }
            }
        }
        None
    }

    pub fn is_tree_like(&self) -> bool {
        self.tree_like_counterexample().is_none()
    }

    /// Decides `e ≪ f`: `e <= f` and some nonzero `d <= f` is orthogonal to
    /// `e`. Returns the least-index such `d`.
    ///
    /// `e = 0` is allowed; then any nonzero `d <= f` qualifies.
    pub fn strictly_dominated_by(&self, e: ElementId, f: ElementId) -> Option<ElementId> {
        if !self.leq(e, f) {
            return None;
        }
        self.nonzero_elements()
            .find(|&d| self.leq(d, f) && self.orthogonal(d, e))
    }

    /// Nonzero elements with nothing strictly between them and zero.
    pub fn atoms(&self) -> Vec<ElementId> {
        self.nonzero_elements()
            .filter(|&e| {
                !self
                    .nonzero_elements()
                    .any(|f| f != e && self.leq(f, e))
            })
            .collect()
    }

    pub fn down_set(&self, e: ElementId) -> Vec<ElementId> {
        self.elements().filter(|&d| self.leq(d, e)).collect()
    }

    pub fn up_set(&self, e: ElementId) -> Vec<ElementId> {
        self.elements().filter(|&f| self.leq(e, f)).collect()
    }

    /// Atoms below `e`. These generate exactly the points of the tight
    /// spectrum that contain `e`.
    pub fn atoms_below(&self, e: ElementId) -> Vec<ElementId> {
        self.atoms().into_iter().filter(|&a| self.leq(a, e)).collect()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const F: ElementId = ElementId(1);
    pub const A: ElementId = ElementId(2);
    pub const B: ElementId = ElementId(3);

    /// `{0, f, a, b}` with `a, b <= f` and `a ∧ b = 0`.
    pub fn e4() -> FiniteSemilattice {
        FiniteSemilattice::from_table(&[
            vec![0, 0, 0, 0],
            vec![0, 1, 2, 3],
            vec![0, 2, 2, 0],
            vec![0, 3, 0, 3],
        ])
        .unwrap()
    }

    /// `{0, g, e, f}` with `e ∧ f = g`.
    pub fn diamond() -> FiniteSemilattice {
        FiniteSemilattice::from_table(&[
            vec![0, 0, 0, 0],
            vec![0, 1, 1, 1],
            vec![0, 1, 2, 1],
            vec![0, 1, 1, 3],
        ])
        .unwrap()
    }
}
