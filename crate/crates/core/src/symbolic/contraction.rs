//! Search for a block `X_i` and a power `m > 0` with `f^m(X_i) ⊆ X_i`.
//!
//! The search inspects the incidence matrices `A^m` (`A^m[i][j] = 1` iff
//! `f^m(X_i)` meets `X_j`) for `m = 1, 2, ..`:
//!
//! * if every row of some `A^m` has a single entry, the rows define a map `k`
//!   on block indices; following `k` from the first block until it cycles
//!   gives the answer directly;
//! * otherwise some matrix repeats, `A^{m1} = A^{m2}`, and a row `p` with
//!   several entries has `f^{m1}(X_p) = ∪_{q∈Q} X_q` for its support `Q`.
//!   That union is invariant under `f^{m2-m1}`, so the search recurses on the
//!   blocks of `Q` with the map `f^{m2-m1}`.
//!
//! The standing assumption (for each power `m` and blocks `i, j`, the image
//! `f^m(X_i)` is disjoint from, inside, or contains `X_j`) is checked at every
//! power the search inspects, and every answer is verified directly before it
//! is returned.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Set operations and images needed by the search. Block indices are
/// `0..block_count()`; `block_image(i, p)` is `f^p(X_i)`.
pub trait BlockOracle {
    type Set: Clone + fmt::Debug;
    type Separator: Clone + fmt::Debug;

    fn block_count(&self) -> usize;
    fn block(&self, i: usize) -> Self::Set;
    fn block_image(&mut self, i: usize, power: u64) -> Result<Self::Set, OracleError>;
    fn is_disjoint(&self, a: &Self::Set, b: &Self::Set) -> bool;
    fn is_subset(&self, a: &Self::Set, b: &Self::Set) -> bool;
    fn union(&self, a: &Self::Set, b: &Self::Set) -> Self::Set;
    /// A nonempty piece of `outer ∖ inner`, if there is one.
    fn separator(&self, outer: &Self::Set, inner: &Self::Set) -> Option<Self::Separator>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("size budget of {limit} exceeded")]
    Budget { limit: usize },
    #[error("{0}")]
    Failed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest power of `f` the search may inspect.
    pub max_power: u64,
    /// Check the standing assumption at every power up to this bound before
    /// searching.
    pub hypothesis_sweep: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_power: 4096, hypothesis_sweep: None }
    }
}

/// A failure of the standing assumption or of a step the argument relies on.
/// Powers are powers of the original map; blocks are original indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    /// `f^power(X_block)` meets `X_target` without containing or being
    /// contained in it.
    Hypothesis { power: u64, block: usize, target: usize },
    /// `f^power(X_block)` meets no block.
    EmptyRow { power: u64, block: usize },
    /// `f^power(X_block)` meets a block outside the current subsystem.
    EscapesSubsystem { power: u64, block: usize, target: usize },
    /// A row with several entries covers every block of the subsystem.
    SupportIsFull { power: u64, row: usize },
    /// `f^power(X_row)` is not the union of the blocks it meets.
    UnionMismatch { power: u64, row: usize },
    /// The candidate `f^power(X_block) ⊆ X_block` failed direct verification.
    WitnessRejected { block: usize, power: u64 },
    /// `f^power(X_block)` was expected to be a proper subset but is not.
    NoSeparator { block: usize, power: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Hypothesis { power, block, target } => write!(
                f,
                "f^{power}(X{}) straddles X{}",
                block + 1,
                target + 1
            ),
            Violation::EmptyRow { power, block } => {
                write!(f, "f^{power}(X{}) meets no block", block + 1)
            }
            Violation::EscapesSubsystem { power, block, target } => write!(
                f,
                "f^{power}(X{}) meets X{} outside the subsystem",
                block + 1,
                target + 1
            ),
            Violation::SupportIsFull { power, row } => {
                write!(f, "row {} of A^{power} covers every block", row + 1)
            }
            Violation::UnionMismatch { power, row } => write!(
                f,
                "f^{power}(X{}) is not the union of the blocks it meets",
                row + 1
            ),
            Violation::WitnessRejected { block, power } => {
                write!(f, "f^{power}(X{}) is not contained in X{}", block + 1, block + 1)
            }
            Violation::NoSeparator { block, power } => {
                write!(f, "f^{power}(X{}) is all of X{}", block + 1, block + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("assumption violated: {0}")]
    Violation(Violation),
    #[error("no answer up to power {max_power}")]
    Exhausted { max_power: u64 },
    #[error("size budget of {limit} exceeded")]
    Budget { limit: usize },
    #[error("the map is surjective")]
    NotApplicable,
    #[error("oracle failure: {0}")]
    Oracle(String),
}

impl From<OracleError> for SearchError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { limit } => SearchError::Budget { limit },
            OracleError::Failed(msg) => SearchError::Oracle(msg),
        }
    }
}

impl From<Violation> for SearchError {
    fn from(v: Violation) -> Self {
        SearchError::Violation(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionWitness<S> {
    pub block: usize,
    pub power: u64,
    pub strict: bool,
    pub separator: Option<S>,
}

/// Rows and columns are `blocks` (original indices); `power` is a power of
/// the original map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IncidenceMatrix {
    pub power: u64,
    pub blocks: Vec<usize>,
    pub entries: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn size(&self) -> usize {
        self.blocks.len()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.entries[row][col] == 1
    }

    /// Column positions of the entries of a row.
    pub fn support(&self, row: usize) -> Vec<usize> {
        (0..self.size()).filter(|&c| self.get(row, c)).collect()
    }

    pub fn is_all_singleton(&self) -> bool {
        (0..self.size()).all(|r| self.support(r).len() == 1)
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// One decision of the search. `blocks` are the blocks of the subsystem
/// being searched (original indices); in that subsystem the map is
/// `f^step`, and `power` counts powers of `f^step`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum TraceStep {
    /// Every row of `A^power` has one entry; `k_map[t]` is the block that
    /// `blocks[t]` is sent into. `k^p` and `k^q` of the first block agree.
    Case1 {
        level: usize,
        blocks: Vec<usize>,
        step: u64,
        power: u64,
        k_map: Vec<usize>,
        p: u64,
        q: u64,
        block: usize,
        witness_power: u64,
    },
    /// `A^{m1} = A^{m2}`; row `row` has support `support`, and the search
    /// continues on those blocks with step `sub_step = step·(m2 - m1)`.
    Case2 {
        level: usize,
        blocks: Vec<usize>,
        step: u64,
        m1: u64,
        m2: u64,
        row: usize,
        support: Vec<usize>,
        sub_step: u64,
    },
    /// `f^power(X_block) = X_block`; the block is dropped and the search for
    /// a proper inclusion continues on the rest with step `power`.
    Exclude { level: usize, blocks: Vec<usize>, step: u64, block: usize, power: u64 },
    /// A single block remains and `f^step` is not onto it.
    SingleBlock { level: usize, block: usize, step: u64 },
}

/// Number of matrices inspected at one level of the recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopStat {
    pub level: usize,
    pub blocks: Vec<usize>,
    pub step: u64,
    pub iterations: u64,
    /// `2^{n²} + 1` for the `n` blocks of the level, saturating.
    pub horizon: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AlgorithmTrace {
    pub steps: Vec<TraceStep>,
    pub loops: Vec<LoopStat>,
}

impl AlgorithmTrace {
    pub fn case2_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, TraceStep::Case2 { .. })).count()
    }
}

/// Outcome of a search together with the decisions taken on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRun<S> {
    pub outcome: Result<ContractionWitness<S>, SearchError>,
    pub trace: AlgorithmTrace,
}

/// `2^{n²} + 1`, saturating.
pub fn repeat_horizon(n: usize) -> u64 {
    let bits = n.saturating_mul(n);
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits).saturating_add(1)
    }
}

fn same<O: BlockOracle>(oracle: &O, a: &O::Set, b: &O::Set) -> bool {
    oracle.is_subset(a, b) && oracle.is_subset(b, a)
}

/// Checks the standing assumption for `f^power`, rows `rows` against every
/// block.
fn check_rows<O: BlockOracle>(oracle: &mut O, rows: &[usize], power: u64) -> Result<(), SearchError> {
    if power == 0 {
        return Ok(());
    }
    for &i in rows {
        let image = oracle.block_image(i, power)?;
        for j in 0..oracle.block_count() {
            let target = oracle.block(j);
            let ok = oracle.is_disjoint(&image, &target)
                || oracle.is_subset(&image, &target)
                || oracle.is_subset(&target, &image);
            if !ok {
                return Err(Violation::Hypothesis { power, block: i, target: j }.into());
            }
        }
    }
    Ok(())
}

/// Checks the standing assumption at one power. Power 0 holds because the
/// blocks are disjoint.
pub fn hypothesis_check_at<O: BlockOracle>(oracle: &mut O, power: u64) -> Result<(), SearchError> {
    let rows: Vec<usize> = (0..oracle.block_count()).collect();
    check_rows(oracle, &rows, power)
}

fn matrix_for<O: BlockOracle>(
    oracle: &mut O,
    blocks: &[usize],
    power: u64,
) -> Result<IncidenceMatrix, SearchError> {
    let mut entries = Vec::with_capacity(blocks.len());
    for &i in blocks {
        let image = oracle.block_image(i, power)?;
        let mut row = vec![0u8; blocks.len()];
        for j in 0..oracle.block_count() {
            if oracle.is_disjoint(&image, &oracle.block(j)) {
                continue;
            }
            match blocks.iter().position(|&b| b == j) {
                Some(c) => row[c] = 1,
                None => {
                    return Err(Violation::EscapesSubsystem { power, block: i, target: j }.into())
                }
            }
        }
        if row.iter().all(|&e| e == 0) {
            return Err(Violation::EmptyRow { power, block: i }.into());
        }
        entries.push(row);
    }
    Ok(IncidenceMatrix { power, blocks: blocks.to_vec(), entries })
}

/// `A^power` over all blocks.
pub fn incidence_matrix<O: BlockOracle>(oracle: &mut O, power: u64) -> Result<IncidenceMatrix, SearchError> {
    let blocks: Vec<usize> = (0..oracle.block_count()).collect();
    matrix_for(oracle, &blocks, power)
}

/// Finds `i` and `m > 0` with `f^m(X_i) ⊆ X_i`. The returned witness is
/// marked strict, with a separator, when the inclusion happens to be proper.
pub fn find_contracting_block<O: BlockOracle>(oracle: &mut O, config: &SearchConfig) -> SearchRun<O::Separator> {
    let mut search = Search { oracle, config, trace: AlgorithmTrace::default() };
    let outcome = search.sweep().and_then(|()| {
        let blocks: Vec<usize> = (0..search.oracle.block_count()).collect();
        let (block, power) = search.contracting(blocks, 1, 0)?;
        search.witness(block, power)
    });
    SearchRun { outcome, trace: search.trace }
}

/// Finds `i` and `m > 0` with `f^m(X_i)` a proper subset of `X_i`, together
/// with a separator inside `X_i ∖ f^m(X_i)`. Requires `f` not surjective.
pub fn find_strictly_contracting_block<O: BlockOracle>(
    oracle: &mut O,
    config: &SearchConfig,
) -> SearchRun<O::Separator> {
    let mut search = Search { oracle, config, trace: AlgorithmTrace::default() };
    let outcome = search.sweep().and_then(|()| {
        if search.is_surjective()? {
            return Err(SearchError::NotApplicable);
        }
        let blocks: Vec<usize> = (0..search.oracle.block_count()).collect();
        search.strictly_contracting(blocks, 1, 0)
    });
    SearchRun { outcome, trace: search.trace }
}

struct Search<'a, O: BlockOracle> {
    oracle: &'a mut O,
    config: &'a SearchConfig,
    trace: AlgorithmTrace,
}

impl<O: BlockOracle> Search<'_, O> {
    fn sweep(&mut self) -> Result<(), SearchError> {
        for power in 1..=self.config.hypothesis_sweep.unwrap_or(0) {
            hypothesis_check_at(self.oracle, power)?;
        }
        Ok(())
    }

    fn is_surjective(&mut self) -> Result<bool, SearchError> {
        let n = self.oracle.block_count();
        let mut universe = self.oracle.block(0);
        let mut image = self.oracle.block_image(0, 1)?;
        for i in 1..n {
            universe = self.oracle.union(&universe, &self.oracle.block(i));
            let next = self.oracle.block_image(i, 1)?;
            image = self.oracle.union(&image, &next);
        }
        Ok(self.oracle.is_subset(&universe, &image))
    }

    /// Base power for `view_power` powers of `f^step`, within `max_power`.
    fn scaled(&self, step: u64, view_power: u64) -> Result<u64, SearchError> {
        let exhausted = SearchError::Exhausted { max_power: self.config.max_power };
        let power = step.checked_mul(view_power).ok_or(exhausted.clone())?;
        if power > self.config.max_power {
            return Err(exhausted);
        }
        Ok(power)
    }

    /// Returns `(block, power)` with `f^power(X_block) ⊆ X_block`, searching
    /// the subsystem `blocks` under `f^step`.
    fn contracting(&mut self, blocks: Vec<usize>, step: u64, level: usize) -> Result<(usize, u64), SearchError> {
        let horizon = repeat_horizon(blocks.len());
        let stat = self.trace.loops.len();
        self.trace.loops.push(LoopStat { level, blocks: blocks.clone(), step, iterations: 0, horizon });
        let mut seen: HashMap<IncidenceMatrix, u64> = HashMap::new();
        let mut m = 0;
        while m < horizon {
            m += 1;
            self.trace.loops[stat].iterations = m;
            let power = self.scaled(step, m)?;
            check_rows(self.oracle, &blocks, power)?;
            let mut matrix = matrix_for(self.oracle, &blocks, power)?;
            if matrix.is_all_singleton() {
                return self.case1(&blocks, step, level, m, &matrix);
            }
            // compare matrices independently of the power they came from
            matrix.power = 0;
            if let Some(&m1) = seen.get(&matrix) {
                return self.case2(&blocks, step, level, m1, m, &matrix);
            }
            seen.insert(matrix, m);
        }
        Err(SearchError::Exhausted { max_power: self.config.max_power })
    }

    fn case1(
        &mut self,
        blocks: &[usize],
        step: u64,
        level: usize,
        m: u64,
        matrix: &IncidenceMatrix,
    ) -> Result<(usize, u64), SearchError> {
        let k: Vec<usize> = (0..blocks.len()).map(|r| matrix.support(r)[0]).collect();
        // first repeat among k^1(0), k^2(0), ..
        let mut first_seen = vec![None; blocks.len()];
        let mut x = 0;
        let mut t = 0u64;
        let (p, q) = loop {
            x = k[x];
            t += 1;
            match first_seen[x] {
                Some(p) => break (p, t),
                None => first_seen[x] = Some(t),
            }
        };
        let block = blocks[x];
        let witness_power = self.scaled(step, (q - p) * m)?;
        self.trace.steps.push(TraceStep::Case1 {
            level,
            blocks: blocks.to_vec(),
            step,
            power: m,
            k_map: k.iter().map(|&c| blocks[c]).collect(),
            p,
            q,
            block,
            witness_power,
        });
        let image = self.oracle.block_image(block, witness_power)?;
        if !self.oracle.is_subset(&image, &self.oracle.block(block)) {
            return Err(Violation::WitnessRejected { block, power: witness_power }.into());
        }
        Ok((block, witness_power))
    }

    fn case2(
        &mut self,
        blocks: &[usize],
        step: u64,
        level: usize,
        m1: u64,
        m2: u64,
        matrix: &IncidenceMatrix,
    ) -> Result<(usize, u64), SearchError> {
        let row = (0..blocks.len())
            .find(|&r| matrix.support(r).len() >= 2)
            .expect("a matrix that is not all-singleton has a row with two entries");
        let support: Vec<usize> = matrix.support(row).into_iter().map(|c| blocks[c]).collect();
        let sub_step = self.scaled(step, m2 - m1)?;
        self.trace.steps.push(TraceStep::Case2 {
            level,
            blocks: blocks.to_vec(),
            step,
            m1,
            m2,
            row: blocks[row],
            support: support.clone(),
            sub_step,
        });
        let p1 = step * m1;
        if support.len() == blocks.len() {
            return Err(Violation::SupportIsFull { power: p1, row: blocks[row] }.into());
        }
        let mut union = self.oracle.block(support[0]);
        for &q in &support[1..] {
            union = self.oracle.union(&union, &self.oracle.block(q));
        }
        for power in [p1, step * m2] {
            let image = self.oracle.block_image(blocks[row], power)?;
            if !same(self.oracle, &image, &union) {
                return Err(Violation::UnionMismatch { power, row: blocks[row] }.into());
            }
        }
        self.contracting(support, sub_step, level + 1)
    }

    fn witness(&mut self, block: usize, power: u64) -> Result<ContractionWitness<O::Separator>, SearchError> {
        let image = self.oracle.block_image(block, power)?;
        let separator = self.oracle.separator(&self.oracle.block(block), &image);
        Ok(ContractionWitness { block, power, strict: separator.is_some(), separator })
    }

    fn strictly_contracting(
        &mut self,
        blocks: Vec<usize>,
        step: u64,
        level: usize,
    ) -> Result<ContractionWitness<O::Separator>, SearchError> {
        if let [block] = blocks[..] {
            self.trace.steps.push(TraceStep::SingleBlock { level, block, step });
            let witness = self.witness(block, step)?;
            if !witness.strict {
                return Err(Violation::NoSeparator { block, power: step }.into());
            }
            return Ok(witness);
        }
        let (block, power) = self.contracting(blocks.clone(), step, level)?;
        let witness = self.witness(block, power)?;
        if witness.strict {
            return Ok(witness);
        }
        // f^power(X_block) = X_block, so f^power maps the other blocks into
        // their union and is still not onto it
        self.trace.steps.push(TraceStep::Exclude { level, blocks: blocks.clone(), step, block, power });
        let rest = blocks.into_iter().filter(|&b| b != block).collect();
        self.strictly_contracting(rest, power, level + 1)
    }
}
