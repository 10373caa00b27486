use super::contraction::{BlockOracle, OracleError};
use super::{Alphabet, PrefixInjection, PrefixSet, SymbolicError, Word};
use crate::lattice::FiniteSemilattice;

/// Unvalidated block system, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawBlockSystem {
    pub alphabet: Alphabet,
    pub universe: Vec<Word>,
    pub blocks: Vec<(String, Vec<Word>)>,
    pub map: Vec<(Word, Word)>,
}

/// A universe of infinite words split into disjoint nonempty blocks, with an
/// injective prefix-rewriting self-map defined on the whole universe.
/// Surjectivity is not required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    alphabet: Alphabet,
    universe: PrefixSet,
    names: Vec<String>,
    blocks: Vec<PrefixSet>,
    map: PrefixInjection,
}

impl BlockSystem {
    pub fn validate(raw: RawBlockSystem) -> Result<BlockSystem, SymbolicError> {
        Self::validate_with_warnings(raw).map(|(system, _)| system)
    }

    /// Validates and also returns input words that were dropped as redundant
    /// during normalization.
    pub fn validate_with_warnings(
        raw: RawBlockSystem,
    ) -> Result<(BlockSystem, Vec<Word>), SymbolicError> {
        let k = raw.alphabet.size();
        if raw.blocks.is_empty() {
            return Err(SymbolicError::NoBlocks);
        }
        let map = PrefixInjection::new(k, raw.map)?;
        let (universe, mut warnings) = PrefixSet::normalize(k, raw.universe)?;
        let mut names = Vec::with_capacity(raw.blocks.len());
        let mut blocks = Vec::with_capacity(raw.blocks.len());
        for (i, (name, words)) in raw.blocks.into_iter().enumerate() {
            let (block, redundant) = PrefixSet::normalize(k, words)?;
            if block.is_empty() {
                return Err(SymbolicError::EmptyBlock(i));
            }
            warnings.extend(redundant);
            names.push(name);
            blocks.push(block);
        }
        for j in 1..blocks.len() {
            for i in 0..j {
                if !blocks[i].is_disjoint(&blocks[j]) {
                    return Err(SymbolicError::BlocksOverlap(i, j));
                }
            }
        }
        let union = blocks
            .iter()
            .fold(PrefixSet::empty(k), |acc, b| acc.union(b));
        if union != universe {
            return Err(SymbolicError::BlocksDontCover);
        }
        if map.domain() != universe {
            return Err(SymbolicError::DomainMismatch);
        }
        if !map.apply(&universe)?.is_subset(&universe) {
            return Err(SymbolicError::ImageEscapesUniverse);
        }
        Ok((BlockSystem { alphabet: raw.alphabet, universe, names, blocks, map }, warnings))
    }

    /// Names blocks `X1, X2, ..`.
    pub fn from_parts(
        alphabet: Alphabet,
        universe: Vec<Word>,
        blocks: Vec<Vec<Word>>,
        map: Vec<(Word, Word)>,
    ) -> Result<BlockSystem, SymbolicError> {
        let blocks = blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| (format!("X{}", i + 1), b))
            .collect();
        BlockSystem::validate(RawBlockSystem { alphabet, universe, blocks, map })
    }

    pub fn to_raw(&self) -> RawBlockSystem {
        RawBlockSystem {
            alphabet: self.alphabet.clone(),
            universe: self.universe.words().cloned().collect(),
            blocks: self
                .names
                .iter()
                .zip(&self.blocks)
                .map(|(n, b)| (n.clone(), b.words().cloned().collect()))
                .collect(),
            map: self.map.pairs().to_vec(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn arity(&self) -> u8 {
        self.alphabet.size()
    }

    pub fn universe(&self) -> &PrefixSet {
        &self.universe
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> &PrefixSet {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[PrefixSet] {
        &self.blocks
    }

    pub fn block_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn map(&self) -> &PrefixInjection {
        &self.map
    }

    pub fn image(&self) -> PrefixSet {
        self.map.apply(&self.universe).expect("validated: domain is the universe")
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.universe
    }

    /// Longest word in the universe, the blocks or the rewrites.
    pub fn max_word_len(&self) -> usize {
        self.blocks
            .iter()
            .map(PrefixSet::max_word_len)
            .chain([self.universe.max_word_len(), self.map.max_word_len()])
            .max()
            .unwrap_or(0)
    }

    pub fn oracle(&self) -> SymbolicOracle<'_> {
        SymbolicOracle::new(self)
    }
}

/// Default limit on the number of cylinders in a single image.
pub const DEFAULT_IMAGE_BUDGET: usize = 20_000;

/// [`BlockOracle`] over a cylinder system. Images `f^p(X_i)` are computed by
/// repeated application of the map and cached per block.
#[derive(Debug, Clone)]
pub struct SymbolicOracle<'a> {
    system: &'a BlockSystem,
    images: Vec<Vec<PrefixSet>>,
    budget: usize,
}

impl<'a> SymbolicOracle<'a> {
    pub fn new(system: &'a BlockSystem) -> Self {
        SymbolicOracle {
            system,
            images: system.blocks.iter().map(|b| vec![b.clone()]).collect(),
            budget: DEFAULT_IMAGE_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn system(&self) -> &BlockSystem {
        self.system
    }
}

impl BlockOracle for SymbolicOracle<'_> {
    type Set = PrefixSet;
    type Separator = Word;

    fn block_count(&self) -> usize {
        self.system.block_count()
    }

    fn block(&self, i: usize) -> PrefixSet {
        self.system.blocks[i].clone()
    }

    fn block_image(&mut self, i: usize, power: u64) -> Result<PrefixSet, OracleError> {
        let power = usize::try_from(power).map_err(|_| OracleError::Budget { limit: self.budget })?;
        let cache = &mut self.images[i];
        while cache.len() <= power {
            let next = self
                .system
                .map
                .apply(cache.last().expect("power 0 is cached"))
                .map_err(|e| OracleError::Failed(e.to_string()))?;
            if next.len() > self.budget {
                return Err(OracleError::Budget { limit: self.budget });
            }
            cache.push(next);
        }
        Ok(cache[power].clone())
    }

    fn is_disjoint(&self, a: &PrefixSet, b: &PrefixSet) -> bool {
        a.is_disjoint(b)
    }

    fn is_subset(&self, a: &PrefixSet, b: &PrefixSet) -> bool {
        a.is_subset(b)
    }

    fn union(&self, a: &PrefixSet, b: &PrefixSet) -> PrefixSet {
        a.union(b)
    }

    fn separator(&self, outer: &PrefixSet, inner: &PrefixSet) -> Option<Word> {
        outer.subtract(inner).words().next().cloned()
    }
}

/// The semilattice of cylinders `Z(u)`, `|u| <= depth`, under intersection,
/// with the empty set as zero. Element `i >= 1` is `words[i - 1]`, in
/// shortlex order.
pub fn cylinder_semilattice(arity: u8, depth: usize) -> (FiniteSemilattice, Vec<Word>) {
    let mut words = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|u| (0..arity).map(move |a| u.child(a)))
            .collect();
        words.extend(layer.iter().cloned());
    }
    let n = words.len() + 1;
    let mut table = vec![vec![0; n]; n];
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            table[i + 1][j + 1] = if u.is_prefix_of(v) {
                j + 1
            } else if v.is_prefix_of(u) {
                i + 1
            } else {
                0
            };
        }
    }
    let lattice = FiniteSemilattice::from_table(&table).expect("cylinders are closed under intersection");
    (lattice, words)
}
