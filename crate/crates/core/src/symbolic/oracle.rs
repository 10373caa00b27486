//! Checks by explicit enumeration of finite words of a fixed length.
//!
//! A finite union of cylinders whose words all have length at most `L` is
//! determined by the length-`L` words it contains, so comparisons at depth
//! `L` are exact. Nothing here uses the [`PrefixSet`](super::PrefixSet)
//! algebra; inputs are plain word lists and may be unnormalized.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{BlockSystem, SymbolicError, Word};

fn extensions(arity: u8, word: &Word, depth: usize, out: &mut BTreeSet<Word>) {
    if word.len() >= depth {
        out.insert(word.clone());
        return;
    }
    for a in 0..arity {
        extensions(arity, &word.child(a), depth, out);
    }
}

fn has_prefix_in(words: &[Word], x: &Word) -> bool {
    words.iter().any(|u| u.is_prefix_of(x))
}

fn check_depth(depth: usize, words: &[&[Word]]) -> Result<(), SymbolicError> {
    let needed = words.iter().flat_map(|ws| ws.iter()).map(Word::len).max().unwrap_or(0);
    if depth < needed {
        return Err(SymbolicError::DepthTooSmall { depth, needed });
    }
    Ok(())
}

/// Length-`depth` words with a prefix in `words`, for `depth` at least the
/// longest word.
pub fn truncate(arity: u8, words: &[Word], depth: usize) -> Result<BTreeSet<Word>, SymbolicError> {
    check_depth(depth, &[words])?;
    let mut out = BTreeSet::new();
    for u in words {
        extensions(arity, u, depth, &mut out);
    }
    Ok(out)
}

/// Whether the union of `Z(u)`, `u ∈ p`, lies inside that of `q`.
pub fn truncation_subset(arity: u8, p: &[Word], q: &[Word], depth: usize) -> Result<bool, SymbolicError> {
    check_depth(depth, &[p, q])?;
    Ok(truncate(arity, p, depth)?.iter().all(|x| has_prefix_in(q, x)))
}

/// Whether `p` and `q` denote the same set.
pub fn truncation_equal(arity: u8, p: &[Word], q: &[Word], depth: usize) -> Result<bool, SymbolicError> {
    check_depth(depth, &[p, q])?;
    Ok(truncate(arity, p, depth)? == truncate(arity, q, depth)?)
}

/// Image of a word under `power` applications of the map, one rewrite at a
/// time. `None` if some intermediate word has no rewrite source as prefix.
pub fn iterate_word(system: &BlockSystem, word: &Word, power: u64) -> Option<Word> {
    let mut x = word.clone();
    for _ in 0..power {
        x = system
            .map()
            .pairs()
            .iter()
            .find(|(u, _)| u.is_prefix_of(&x))
            .map(|(u, v)| v.concat(x.strip_prefix(u).expect("u is a prefix of x")))?;
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationReport {
    pub depth: usize,
    /// `f^m(X_i) ⊆ X_i`.
    pub contained: bool,
    /// `Z(separator) ⊆ X_i`.
    pub separator_inside: Option<bool>,
    /// `Z(separator) ∩ f^m(X_i) = ∅`.
    pub separator_disjoint: Option<bool>,
}

impl TruncationReport {
    pub fn holds(&self) -> bool {
        self.contained && self.separator_inside != Some(false) && self.separator_disjoint != Some(false)
    }
}

/// Depth at which [`verify_witness_by_truncation`] works for `power`:
/// longest word plus `power` times the largest length change of a rewrite.
pub fn witness_depth(system: &BlockSystem, power: u64) -> usize {
    let growth = system.map().max_rewrite_growth() as u64;
    let depth = system.max_word_len() as u64 + power.saturating_mul(growth);
    usize::try_from(depth).unwrap_or(usize::MAX)
}

/// Verifies `f^power(X_block) ⊆ X_block`, and a separator if given, by
/// pushing every length-`depth` word of the block through the map pointwise.
///
/// After `power` rewrites each word is still at least as long as every word
/// of the system, so its cylinder is decided by its prefixes alone.
pub fn verify_witness_by_truncation(
    system: &BlockSystem,
    block: usize,
    power: u64,
    separator: Option<&Word>,
    depth: usize,
) -> Result<TruncationReport, SymbolicError> {
    let needed = witness_depth(system, power);
    if depth < needed {
        return Err(SymbolicError::DepthTooSmall { depth, needed });
    }
    let arity = system.arity();
    let block_words: Vec<Word> = system.block(block).words().cloned().collect();
    let mut images = Vec::new();
    for x in truncate(arity, &block_words, depth)? {
        images.push(iterate_word(system, &x, power).ok_or(SymbolicError::OutsideDomain(x))?);
    }
    let contained = images.iter().all(|y| has_prefix_in(&block_words, y));
    let (separator_inside, separator_disjoint) = match separator {
        None => (None, None),
        Some(d) => {
            let inner = truncate(arity, std::slice::from_ref(d), depth.max(d.len()))?;
            let inside = inner.iter().all(|x| has_prefix_in(&block_words, x));
            let disjoint = images.iter().all(|y| !y.is_comparable(d));
            (Some(inside), Some(disjoint))
        }
    };
    Ok(TruncationReport { depth, contained, separator_inside, separator_disjoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::system::fixtures::{shift, w, words};

    #[test]
    fn subset_examples() {
        assert_eq!(truncation_subset(2, &words(&["aa"]), &words(&["a"]), 3), Ok(true));
        assert_eq!(truncation_subset(2, &words(&["a"]), &words(&["aa", "bb"]), 3), Ok(false));
        assert_eq!(
            truncation_subset(2, &words(&["aaaa"]), &words(&["a"]), 3),
            Err(SymbolicError::DepthTooSmall { depth: 3, needed: 4 })
        );
        assert_eq!(truncation_equal(2, &words(&["aa", "ab"]), &words(&["a"]), 2), Ok(true));
    }

    #[test]
    fn shift_witness() {
        let sys = shift();
        let depth = witness_depth(&sys, 1);
        assert_eq!(depth, 3);
        let report = verify_witness_by_truncation(&sys, 0, 1, Some(&w("ab")), depth).unwrap();
        assert!(report.holds());
        let report = verify_witness_by_truncation(&sys, 0, 1, Some(&w("aa")), depth).unwrap();
        assert_eq!(report.separator_disjoint, Some(false));
        let report = verify_witness_by_truncation(&sys, 1, 1, None, depth).unwrap();
        assert!(!report.contained);
    }
}
