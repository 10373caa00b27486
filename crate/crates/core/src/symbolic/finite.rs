//! Block systems on a finite ground set `{0, .., N-1}`. An injective self-map
//! of a finite set is a permutation, so these systems are always surjective
//! and only the non-strict search applies.

use std::collections::BTreeSet;

use thiserror::Error;

use super::contraction::{BlockOracle, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteSystemError {
    #[error("the map is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("a block system needs at least one block")]
    NoBlocks,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("point {0} is outside the ground set")]
    OutOfRange(usize),
    #[error("point {point} lies in more than one block")]
    BlocksOverlap { point: usize },
    #[error("point {0} lies in no block")]
    Uncovered(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteBlockSystem {
    map: Vec<usize>,
    blocks: Vec<BTreeSet<usize>>,
    /// For each point, its cycle and its position in that cycle.
    cycle_of: Vec<(usize, usize)>,
    cycles: Vec<Vec<usize>>,
}

impl FiniteBlockSystem {
    pub fn new(map: Vec<usize>, blocks: Vec<Vec<usize>>) -> Result<Self, FiniteSystemError> {
        let n = map.len();
        let mut hit = vec![false; n];
        for &y in &map {
            if y >= n || std::mem::replace(&mut hit[y], true) {
                return Err(FiniteSystemError::NotPermutation(n));
            }
        }
        if blocks.is_empty() {
            return Err(FiniteSystemError::NoBlocks);
        }
        let mut owner = vec![None; n];
        let mut sets = Vec::with_capacity(blocks.len());
        for (i, block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(FiniteSystemError::EmptyBlock(i));
            }
            for &x in &block {
                if x >= n {
                    return Err(FiniteSystemError::OutOfRange(x));
                }
                if owner[x].is_some_and(|o| o != i) {
                    return Err(FiniteSystemError::BlocksOverlap { point: x });
                }
                owner[x] = Some(i);
            }
            sets.push(block.into_iter().collect());
        }
        if let Some(x) = owner.iter().position(Option::is_none) {
            return Err(FiniteSystemError::Uncovered(x));
        }

        let mut cycle_of = vec![(usize::MAX, 0); n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if cycle_of[start].0 != usize::MAX {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            loop {
                cycle_of[x] = (cycles.len(), cycle.len());
                cycle.push(x);
                x = map[x];
                if x == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Ok(FiniteBlockSystem { map, blocks: sets, cycle_of, cycles })
    }

    pub fn ground_size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `f^power(x)`.
    pub fn apply(&self, x: usize, power: u64) -> usize {
        let (c, pos) = self.cycle_of[x];
        let cycle = &self.cycles[c];
        let shift = (power % cycle.len() as u64) as usize;
        cycle[(pos + shift) % cycle.len()]
    }

    /// `f^power(X_block)`.
    pub fn image(&self, block: usize, power: u64) -> BTreeSet<usize> {
        self.blocks[block].iter().map(|&x| self.apply(x, power)).collect()
    }

    /// Order of the permutation: powers repeat with this period.
    pub fn order(&self) -> u64 {
        self.cycles
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Whether the standing assumption holds at every power. Powers repeat
    /// with period [`order`](Self::order), so one period decides it.
    pub fn satisfies_hypothesis(&self) -> bool {
        (1..self.order()).all(|m| {
            (0..self.block_count()).all(|i| {
                let image = self.image(i, m);
                self.blocks.iter().all(|b| {
                    image.is_disjoint(b) || image.is_subset(b) || b.is_subset(&image)
                })
            })
        })
    }

    pub fn oracle(&self) -> FiniteOracle<'_> {
        FiniteOracle { system: self }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[derive(Debug, Clone, Copy)]
pub struct FiniteOracle<'a> {
    system: &'a FiniteBlockSystem,
}

impl BlockOracle for FiniteOracle<'_> {
    type Set = BTreeSet<usize>;
    type Separator = usize;

    fn block_count(&self) -> usize {
        self.system.block_count()
    }

    fn block(&self, i: usize) -> BTreeSet<usize> {
        self.system.blocks[i].clone()
    }

    fn block_image(&mut self, i: usize, power: u64) -> Result<BTreeSet<usize>, OracleError> {
        Ok(self.system.image(i, power))
    }

    fn is_disjoint(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
        a.is_disjoint(b)
    }

    fn is_subset(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
        a.is_subset(b)
    }

    fn union(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        a | b
    }

    fn separator(&self, outer: &BTreeSet<usize>, inner: &BTreeSet<usize>) -> Option<usize> {
        outer.difference(inner).next().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(
            FiniteBlockSystem::new(vec![0, 0], vec![vec![0, 1]]),
            Err(FiniteSystemError::NotPermutation(2))
        );
        assert_eq!(
            FiniteBlockSystem::new(vec![1, 0], vec![vec![0], vec![0, 1]]),
            Err(FiniteSystemError::BlocksOverlap { point: 0 })
        );
        assert_eq!(
            FiniteBlockSystem::new(vec![1, 0, 2], vec![vec![0], vec![1]]),
            Err(FiniteSystemError::Uncovered(2))
        );
        assert_eq!(
            FiniteBlockSystem::new(vec![1, 0], vec![vec![0, 1], vec![]]),
            Err(FiniteSystemError::EmptyBlock(1))
        );
    }

    #[test]
    fn powers_follow_cycles() {
        let sys = FiniteBlockSystem::new(vec![1, 2, 0, 4, 3], vec![vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(sys.order(), 6);
        let mut x = 0;
        for m in 0..10 {
            assert_eq!(sys.apply(0, m), x);
            x = sys.map()[x];
        }
        assert!(sys.satisfies_hypothesis());
    }

    #[test]
    fn hypothesis_can_fail() {
        // f^1({0, 1}) = {1, 2} straddles {0, 1}
        let sys = FiniteBlockSystem::new(vec![1, 2, 0], vec![vec![0, 1], vec![2]]).unwrap();
        assert!(!sys.satisfies_hypothesis());
    }
}
