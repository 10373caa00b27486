//! Cylinder sets over right-infinite words, injective prefix-rewriting maps
//! and the contracting-block search.
//!
//! The search itself ([`contraction`]) is written against the
//! [`BlockOracle`] interface and is instantiated by cylinder systems
//! ([`BlockSystem`]), by finite permutation systems ([`finite`]) and by
//! scripted oracles in tests.

mod claim;
pub mod contraction;
pub mod finite;
mod injection;
pub mod oracle;
mod prefix_set;
pub mod scripted;
mod system;
mod word;

use thiserror::Error;

pub use claim::{extract_contraction_witness, ClaimChecks, CylinderClaim};
pub use contraction::{
    find_contracting_block, find_strictly_contracting_block, hypothesis_check_at, repeat_horizon,
    incidence_matrix, AlgorithmTrace, BlockOracle, ContractionWitness, IncidenceMatrix,
    LoopStat, OracleError, SearchConfig, SearchError, SearchRun, TraceStep, Violation,
};
pub use injection::{PrefixInjection, DEFAULT_PAIR_BUDGET};
pub use prefix_set::PrefixSet;
pub use system::{
    cylinder_semilattice, BlockSystem, RawBlockSystem, SymbolicOracle, DEFAULT_IMAGE_BUDGET,
};
pub use word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("alphabet {0:?} must have 2 to 26 distinct ASCII letters")]
    BadAlphabet(String),
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(char),
    #[error("letter {letter} is out of range for an alphabet of size {arity}")]
    LetterOutOfRange { letter: u8, arity: u8 },
    #[error("rewrite sources {first} and {second} are prefix-comparable")]
    NotPrefixFree { first: usize, second: usize },
    #[error("rewrite targets {first} and {second} are prefix-comparable, so the map is not injective")]
    NotInjective { first: usize, second: usize },
    #[error("cylinder {0} is not covered by the rewrite sources")]
    OutsideDomain(Word),
    #[error("cylinder {0} is not covered by the sources of the outer map")]
    NotComposable(Word),
    #[error("rewrite budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
    #[error("truncation depth {depth} is below the required {needed}")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("a block system needs at least one block")]
    NoBlocks,
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("blocks {0} and {1} overlap")]
    BlocksOverlap(usize, usize),
    #[error("the blocks do not partition the universe")]
    BlocksDontCover,
    #[error("the map's domain differs from the universe")]
    DomainMismatch,
    #[error("the map's image leaves the universe")]
    ImageEscapesUniverse,
}
