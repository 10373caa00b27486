use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{SymbolicError, Word};

/// A finite union of cylinders in normal form: prefix-free and without a
/// complete family of siblings `{u·a : a in the alphabet}`.
///
/// The normal form is canonical, so two prefix sets denote the same set of
/// infinite words iff they are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrefixSet {
    #[serde(skip)]
    arity: u8,
    words: BTreeSet<Word>,
}

impl PrefixSet {
    pub fn empty(arity: u8) -> Self {
        PrefixSet { arity, words: BTreeSet::new() }
    }

    /// Everything: `Z(ε)`.
    pub fn full(arity: u8) -> Self {
        PrefixSet { arity, words: BTreeSet::from([Word::empty()]) }
    }

    pub fn cylinder(arity: u8, word: Word) -> Self {
        PrefixSet::from_words(arity, [word])
    }

    /// Normalizes an arbitrary word list, returning the normal form and the
    /// input words that were redundant because a proper prefix (or an equal
    /// word) was already present.
    pub fn normalize(
        arity: u8,
        words: impl IntoIterator<Item = Word>,
    ) -> Result<(PrefixSet, Vec<Word>), SymbolicError> {
        let mut all: Vec<Word> = Vec::new();
        for w in words {
            if let Some(&l) = w.letters().iter().find(|&&l| l >= arity) {
                return Err(SymbolicError::LetterOutOfRange { letter: l, arity });
            }
            all.push(w);
        }
        let mut redundant = Vec::new();
        let mut sorted = all.clone();
        sorted.sort();
        // after sorting, a word's proper prefixes come before it
        let mut kept: BTreeSet<Word> = BTreeSet::new();
        for w in sorted {
            if w.prefixes().any(|p| kept.contains(&Word::from_letters(p))) {
                redundant.push(w);
            } else {
                kept.insert(w);
            }
        }
        let mut set = PrefixSet { arity, words: kept };
        set.collapse_siblings();
        Ok((set, redundant))
    }

    /// Normalizes, silently dropping redundant words.
    pub fn from_words(arity: u8, words: impl IntoIterator<Item = Word>) -> Self {
        PrefixSet::normalize(arity, words)
            .expect("letters in range")
            .0
    }

    fn from_disjoint(arity: u8, words: Vec<Word>) -> Self {
        let mut set = PrefixSet { arity, words: words.into_iter().collect() };
        set.collapse_siblings();
        set
    }

    fn collapse_siblings(&mut self) {
        let k = self.arity as usize;
        let Some(mut len) = self.words.iter().map(Word::len).max() else {
            return;
        };
        while len > 0 {
            let mut families: BTreeMap<Word, usize> = BTreeMap::new();
            for w in self.words.iter().filter(|w| w.len() == len) {
                *families.entry(w.parent().expect("nonempty")).or_default() += 1;
            }
            for (parent, count) in families {
                if count == k {
                    for a in 0..self.arity {
                        self.words.remove(&parent.child(a));
                    }
                    self.words.insert(parent);
                }
            }
            len -= 1;
        }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn words(&self) -> impl ExactSizeIterator<Item = &Word> + Clone {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Some member is a prefix of `u`, so `Z(u)` lies inside the set.
    pub fn has_prefix_of(&self, u: &Word) -> bool {
        u.prefixes().any(|p| self.words.contains(&Word::from_letters(p)))
    }

    /// Some member strictly extends `u`.
    pub fn has_proper_extension(&self, u: &Word) -> bool {
        self.words
            .range(u.clone()..)
            .find(|w| *w != u)
            .is_some_and(|w| u.is_prefix_of(w))
    }

    /// `Z(u)` is contained in the set.
    pub fn contains_cylinder(&self, u: &Word) -> bool {
        if self.has_prefix_of(u) {
            return true;
        }
        if !self.has_proper_extension(u) {
            return false;
        }
        (0..self.arity).all(|a| self.contains_cylinder(&u.child(a)))
    }

    /// Denotational inclusion.
    pub fn is_subset(&self, other: &PrefixSet) -> bool {
        self.words.iter().all(|u| other.contains_cylinder(u))
    }

    pub fn is_disjoint(&self, other: &PrefixSet) -> bool {
        self.words
            .iter()
            .all(|u| !other.has_prefix_of(u) && !other.has_proper_extension(u))
    }

    pub fn union(&self, other: &PrefixSet) -> PrefixSet {
        PrefixSet::from_words(self.arity, self.words.iter().chain(other.words.iter()).cloned())
    }

    pub fn intersection(&self, other: &PrefixSet) -> PrefixSet {
        let mut out = Vec::new();
        for u in &self.words {
            if other.has_prefix_of(u) {
                out.push(u.clone());
            } else {
                out.extend(other.words.range(u.clone()..).take_while(|w| u.is_prefix_of(w)).cloned());
            }
        }
        PrefixSet::from_disjoint(self.arity, out)
    }

    /// `self ∖ other`, by expanding cylinders of `self` to the depth of
    /// `other` and dropping covered leaves.
    pub fn subtract(&self, other: &PrefixSet) -> PrefixSet {
        let mut out = Vec::new();
        for u in &self.words {
            self.subtract_cylinder(u.clone(), other, &mut out);
        }
        PrefixSet::from_disjoint(self.arity, out)
    }

    fn subtract_cylinder(&self, u: Word, other: &PrefixSet, out: &mut Vec<Word>) {
        if other.has_prefix_of(&u) {
            return;
        }
        if !other.has_proper_extension(&u) {
            out.push(u);
            return;
        }
        for a in 0..self.arity {
            self.subtract_cylinder(u.child(a), other, out);
        }
    }
}

impl fmt::Display for PrefixSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("}")
    }
}
