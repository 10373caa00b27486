//! A [`BlockOracle`] whose images are given by a table, for driving the
//! search through chosen incidence patterns. Sets are sets of labels; no
//! injectivity or consistency between powers is assumed.

use std::collections::{BTreeSet, HashMap};

use super::contraction::{
    find_contracting_block, find_strictly_contracting_block, BlockOracle, OracleError, SearchConfig, SearchError, SearchRun,
    Violation,
};

#[derive(Debug, Clone, Default)]
pub struct ScriptedOracle {
    blocks: Vec<BTreeSet<u32>>,
    images: HashMap<(usize, u64), BTreeSet<u32>>,
    queries: BTreeSet<(usize, u64)>,
}

impl ScriptedOracle {
    pub fn new(blocks: Vec<Vec<u32>>) -> Self {
        ScriptedOracle {
            blocks: blocks.into_iter().map(|b| b.into_iter().collect()).collect(),
            ..Default::default()
        }
    }

    pub fn set_image(&mut self, block: usize, power: u64, labels: Vec<u32>) {
        self.images.insert((block, power), labels.into_iter().collect());
    }

    /// Every `(block, power)` image requested so far.
    pub fn queries(&self) -> &BTreeSet<(usize, u64)> {
        &self.queries
    }
}

impl BlockOracle for ScriptedOracle {
    type Set = BTreeSet<u32>;
    type Separator = u32;

    fn block_count(&self) -> usize {
        self.blocks.len()
    }

    fn block(&self, i: usize) -> BTreeSet<u32> {
        self.blocks[i].clone()
    }

    fn block_image(&mut self, i: usize, power: u64) -> Result<BTreeSet<u32>, OracleError> {
        self.queries.insert((i, power));
        if power == 0 {
            return Ok(self.blocks[i].clone());
        }
        self.images
            .get(&(i, power))
            .cloned()
            .ok_or_else(|| OracleError::Failed(format!("no image scripted for block {i} at power {power}")))
    }

    fn is_disjoint(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> bool {
        a.is_disjoint(b)
    }

    fn is_subset(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> bool {
        a.is_subset(b)
    }

    fn union(&self, a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> BTreeSet<u32> {
        a | b
    }

    fn separator(&self, outer: &BTreeSet<u32>, inner: &BTreeSet<u32>) -> Option<u32> {
        outer.difference(inner).next().copied()
    }
}

/// A scripted run and the outcome the search must reach on it.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub oracle: ScriptedOracle,
    pub config: SearchConfig,
    pub strict: bool,
    /// `(block, power)` of the witness, or the error.
    pub expected: Result<(usize, u64), SearchError>,
}

impl Scenario {
    /// Runs the search this scenario is meant for on a fresh copy of the
    /// oracle.
    pub fn run(&self) -> SearchRun<u32> {
        let mut oracle = self.oracle.clone();
        if self.strict {
            find_strictly_contracting_block(&mut oracle, &self.config)
        } else {
            find_contracting_block(&mut oracle, &self.config)
        }
    }

    pub fn passes(&self) -> bool {
        self.run().outcome.map(|w| (w.block, w.power)) == self.expected
    }
}

/// Singleton blocks `{0}, .., {n-1}` with images given per power as one
/// label list per block.
fn singletons(n: u32, rows: &[(u64, &[&[u32]])]) -> ScriptedOracle {
    scripted((0..n).map(|i| vec![i]).collect(), rows)
}

fn scripted(blocks: Vec<Vec<u32>>, rows: &[(u64, &[&[u32]])]) -> ScriptedOracle {
    let mut oracle = ScriptedOracle::new(blocks);
    for &(power, images) in rows {
        for (block, labels) in images.iter().enumerate() {
            oracle.set_image(block, power, labels.to_vec());
        }
    }
    oracle
}

fn scenario(name: &'static str, oracle: ScriptedOracle, expected: Result<(usize, u64), SearchError>) -> Scenario {
    Scenario { name, oracle, config: SearchConfig::default(), strict: false, expected }
}

/// One scenario per outcome of a repeated incidence matrix, plus the
/// neighbouring failures of the search.
pub fn scenarios() -> Vec<Scenario> {
    use Violation::*;
    let repeat_then_fixed: &[&[u32]] = &[&[1, 2], &[1], &[2]];
    let mut out = vec![
        scenario(
            "support covers the subsystem",
            singletons(3, &[(1, &[&[0, 1, 2], &[1], &[2]]), (2, &[&[0, 1, 2], &[1], &[2]])]),
            Err(SupportIsFull { power: 1, row: 0 }.into()),
        ),
        scenario(
            "image at the first repeat is not a union of blocks",
            singletons(3, &[(1, &[&[1, 2, 9], &[1], &[2]]), (2, &[&[1, 2, 9], &[1], &[2]])]),
            Err(UnionMismatch { power: 1, row: 0 }.into()),
        ),
        scenario(
            "image at the second repeat is not a union of blocks",
            singletons(3, &[(1, repeat_then_fixed), (2, &[&[1, 2, 9], &[1], &[2]])]),
            Err(UnionMismatch { power: 2, row: 0 }.into()),
        ),
        scenario(
            "sub-system leaks into a dropped block",
            singletons(3, &[(1, &[&[1, 2], &[0], &[2]]), (2, &[&[1, 2], &[0], &[2]])]),
            Err(EscapesSubsystem { power: 1, block: 1, target: 0 }.into()),
        ),
        scenario("image meets no block", singletons(3, &[(1, &[&[9], &[1], &[2]])]), Err(EmptyRow { power: 1, block: 0 }.into())),
        scenario(
            "image straddles a block",
            scripted(vec![vec![0, 1], vec![2], vec![3]], &[(1, &[&[0, 2], &[2], &[3]])]),
            Err(Hypothesis { power: 1, block: 0, target: 0 }.into()),
        ),
        scenario(
            "cycle candidate fails direct verification",
            scripted(vec![vec![0], vec![1], vec![2]], &[(1, &[&[1], &[0], &[2]]), (2, &[&[0], &[2], &[2]])]),
            Err(WitnessRejected { block: 1, power: 2 }.into()),
        ),
        scenario(
            "repeat rescales the sub-witness",
            singletons(3, &[(1, &[&[1, 2], &[2], &[1]]), (2, &[&[1, 2], &[1], &[2]]), (3, &[&[1, 2], &[2], &[1]])]),
            Ok((1, 2)),
        ),
        scenario(
            "two nested repeats",
            singletons(
                5,
                &[
                    (1, &[&[1, 2, 3], &[2], &[3], &[1], &[4]]),
                    (2, &[&[1, 2, 3], &[2, 3], &[3], &[2], &[4]]),
                    (3, &[&[1, 2, 3], &[2], &[3], &[1], &[4]]),
                    (4, &[&[1, 2, 3], &[1, 2, 3], &[2], &[3], &[4]]),
                    (6, &[&[1, 2, 3], &[2, 3], &[3], &[2], &[4]]),
                ],
            ),
            Ok((2, 4)),
        ),
        scenario("missing image", singletons(2, &[]), Err(SearchError::Oracle("no image scripted for block 0 at power 1".into()))),
    ];
    let mut capped = scenario(
        "repeat lies beyond the power cap",
        singletons(3, &[(1, repeat_then_fixed), (2, repeat_then_fixed)]),
        Err(SearchError::Exhausted { max_power: 1 }),
    );
    capped.config.max_power = 1;
    out.push(capped);
    // strict search: X2 is swapped with X1, both are dropped, and X3 = {2, 5}
    // is all that is left
    let excluded = |last: &'static [u32]| -> ScriptedOracle {
        let mut o = scripted(vec![vec![0], vec![1], vec![2, 5]], &[(1, &[&[1], &[0], &[2]])]);
        o.set_image(1, 2, vec![1]);
        o.set_image(0, 2, vec![0]);
        o.set_image(2, 2, last.to_vec());
        o
    };
    for (name, last, expected) in [
        ("strict search drops fixed blocks", &[2][..], Ok((2, 2))),
        ("strict search runs out of blocks", &[2, 5][..], Err(NoSeparator { block: 2, power: 2 }.into())),
    ] {
        out.push(Scenario { name, oracle: excluded(last), config: SearchConfig::default(), strict: true, expected });
    }
    out
}
