use std::collections::BTreeMap;

use serde::Serialize;

use super::{PrefixSet, SymbolicError, Word};

/// An injective prefix-rewriting map `u_k·w ↦ v_k·w` on infinite words.
///
/// Both the sources `{u_k}` and the targets `{v_k}` are prefix-free; the
/// second condition is exactly injectivity of the induced map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixInjection {
    #[serde(skip)]
    arity: u8,
    pairs: Vec<(Word, Word)>,
    #[serde(skip)]
    lookup: BTreeMap<Word, usize>,
}

/// Default limit on the number of rewrite pairs produced by composition.
pub const DEFAULT_PAIR_BUDGET: usize = 100_000;

impl PrefixInjection {
    /// Validates a list of rewrites. Errors carry the input positions of the
    /// first offending pair of rewrites.
    pub fn new(arity: u8, pairs: Vec<(Word, Word)>) -> Result<Self, SymbolicError> {
        for (u, v) in &pairs {
            if let Some(&l) = u.letters().iter().chain(v.letters()).find(|&&l| l >= arity) {
                return Err(SymbolicError::LetterOutOfRange { letter: l, arity });
            }
        }
        if let Some((first, second)) = first_comparable(pairs.iter().map(|(u, _)| u)) {
            return Err(SymbolicError::NotPrefixFree { first, second });
        }
        if let Some((first, second)) = first_comparable(pairs.iter().map(|(_, v)| v)) {
            return Err(SymbolicError::NotInjective { first, second });
        }
        let lookup = pairs.iter().enumerate().map(|(i, (u, _))| (u.clone(), i)).collect();
        Ok(PrefixInjection { arity, pairs, lookup })
    }

    /// The identity on the given domain.
    pub fn identity(domain: &PrefixSet) -> Self {
        let pairs = domain.words().map(|u| (u.clone(), u.clone())).collect();
        PrefixInjection::new(domain.arity(), pairs).expect("prefix sets are prefix-free")
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn domain(&self) -> PrefixSet {
        PrefixSet::from_words(self.arity, self.pairs.iter().map(|(u, _)| u.clone()))
    }

    pub fn range(&self) -> PrefixSet {
        PrefixSet::from_words(self.arity, self.pairs.iter().map(|(_, v)| v.clone()))
    }

    /// The rewrite whose source is a prefix of `u`.
    fn rule_for(&self, u: &Word) -> Option<&(Word, Word)> {
        u.prefixes()
            .find_map(|p| self.lookup.get(&Word::from_letters(p)))
            .map(|&i| &self.pairs[i])
    }

    fn splits(&self, u: &Word) -> bool {
        self.lookup
            .range(u.clone()..)
            .find(|(w, _)| *w != u)
            .is_some_and(|(w, _)| u.is_prefix_of(w))
    }

    /// Pointwise image of a finite word, defined once the word has a source
    /// as prefix.
    pub fn apply_word(&self, w: &Word) -> Option<Word> {
        self.rule_for(w)
            .map(|(u, v)| v.concat(w.strip_prefix(u).expect("u is a prefix of w")))
    }

    fn image_of_cylinder(&self, u: Word, out: &mut Vec<Word>) -> Result<(), SymbolicError> {
        if let Some(image) = self.apply_word(&u) {
            out.push(image);
            return Ok(());
        }
        if !self.splits(&u) {
            return Err(SymbolicError::OutsideDomain(u));
        }
        for a in 0..self.arity {
            self.image_of_cylinder(u.child(a), out)?;
        }
        Ok(())
    }

    /// Image of the set denoted by `set`.
    pub fn apply(&self, set: &PrefixSet) -> Result<PrefixSet, SymbolicError> {
        let mut out = Vec::new();
        for u in set.words() {
            self.image_of_cylinder(u.clone(), &mut out)?;
        }
        Ok(PrefixSet::from_words(self.arity, out))
    }

    /// `outer ∘ self`, applying `self` first.
    pub fn then(&self, outer: &PrefixInjection) -> Result<PrefixInjection, SymbolicError> {
        self.then_with_budget(outer, DEFAULT_PAIR_BUDGET)
    }

    pub fn then_with_budget(
        &self,
        outer: &PrefixInjection,
        budget: usize,
    ) -> Result<PrefixInjection, SymbolicError> {
        let mut out = Vec::new();
        for (u, v) in &self.pairs {
            outer.refine(u.clone(), v.clone(), &mut out, budget)?;
        }
        let composed = PrefixInjection::new(self.arity, out)?;
        Ok(composed.simplified())
    }

    fn refine(
        &self,
        u: Word,
        v: Word,
        out: &mut Vec<(Word, Word)>,
        budget: usize,
    ) -> Result<(), SymbolicError> {
        if let Some(image) = self.apply_word(&v) {
            if out.len() >= budget {
                return Err(SymbolicError::BudgetExceeded { limit: budget });
            }
            out.push((u, image));
            return Ok(());
        }
        if !self.splits(&v) {
            return Err(SymbolicError::NotComposable(v));
        }
        for a in 0..self.arity {
            self.refine(u.child(a), v.child(a), out, budget)?;
        }
        Ok(())
    }

    /// `m`-fold iterate; `m = 0` is the identity on the domain.
    pub fn power(&self, m: u32) -> Result<PrefixInjection, SymbolicError> {
        self.power_with_budget(m, DEFAULT_PAIR_BUDGET)
    }

    pub fn power_with_budget(&self, m: u32, budget: usize) -> Result<PrefixInjection, SymbolicError> {
        let mut acc = PrefixInjection::identity(&self.domain());
        for _ in 0..m {
            acc = acc.then_with_budget(self, budget)?;
        }
        Ok(acc)
    }

    /// Merges complete sibling families `u·a ↦ v·a` into `u ↦ v` until none
    /// remain, and sorts the rewrites by source.
    pub fn simplified(&self) -> PrefixInjection {
        let k = self.arity;
        let mut map: BTreeMap<Word, Word> = self.pairs.iter().cloned().collect();
        let mut len = map.keys().map(Word::len).max().unwrap_or(0);
        while len > 0 {
            let parents: Vec<Word> = map
                .keys()
                .filter(|u| u.len() == len && u.last() == Some(0))
                .filter_map(Word::parent)
                .collect();
            for parent in parents {
                let Some(target) = map.get(&parent.child(0)).and_then(|v| {
                    (v.last() == Some(0)).then(|| v.parent()).flatten()
                }) else {
                    continue;
                };
                let family = (0..k).all(|a| map.get(&parent.child(a)) == Some(&target.child(a)));
                if family {
                    for a in 0..k {
                        map.remove(&parent.child(a));
                    }
                    map.insert(parent, target);
                }
            }
            len -= 1;
        }
        PrefixInjection::new(k, map.into_iter().collect()).expect("merging keeps both sides prefix-free")
    }

    /// Largest change in length performed by a single rewrite.
    pub fn max_rewrite_growth(&self) -> usize {
        self.pairs
            .iter()
            .map(|(u, v)| u.len().abs_diff(v.len()))
            .max()
            .unwrap_or(0)
    }

    pub fn max_word_len(&self) -> usize {
        self.pairs
            .iter()
            .map(|(u, v)| u.len().max(v.len()))
            .max()
            .unwrap_or(0)
    }
}

fn first_comparable<'a>(words: impl Iterator<Item = &'a Word>) -> Option<(usize, usize)> {
    let words: Vec<&Word> = words.collect();
    for j in 1..words.len() {
        for i in 0..j {
            if words[i].is_comparable(words[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        if s == "." {
            return Word::empty();
        }
        Word::from_letters(s.bytes().map(|b| b - b'a').collect::<Vec<_>>())
    }

    fn map(k: u8, pairs: &[(&str, &str)]) -> PrefixInjection {
        PrefixInjection::new(k, pairs.iter().map(|(u, v)| (w(u), w(v))).collect()).unwrap()
    }

    fn set(k: u8, words: &[&str]) -> PrefixSet {
        PrefixSet::from_words(k, words.iter().map(|s| w(s)))
    }

    fn four_pair() -> PrefixInjection {
        map(3, &[("aa", "b"), ("ab", "c"), ("b", "aa"), ("c", "ab")])
    }

    #[test]
    fn rejects_overlaps() {
        let err = PrefixInjection::new(2, vec![(w("a"), w("b")), (w("b"), w("ba"))]).unwrap_err();
        assert_eq!(err, SymbolicError::NotInjective { first: 0, second: 1 });
        let err = PrefixInjection::new(2, vec![(w("a"), w("b")), (w("ab"), w("a"))]).unwrap_err();
        assert_eq!(err, SymbolicError::NotPrefixFree { first: 0, second: 1 });
    }

    #[test]
    fn apply_examples() {
        let shift = map(2, &[("a", "aa"), ("b", "ab")]);
        assert_eq!(shift.apply(&set(2, &["a", "b"])).unwrap(), set(2, &["a"]));
        let id = map(2, &[("a", "a"), ("b", "b")]);
        for p in [set(2, &["a"]), set(2, &["ab", "ba"]), PrefixSet::full(2)] {
            assert_eq!(id.apply(&p).unwrap(), p);
        }
        let f = four_pair();
        assert_eq!(f.apply(&set(3, &["aa", "ab"])).unwrap(), set(3, &["b", "c"]));
        // Z(a) also contains Z(ac), which has no rewrite
        assert_eq!(f.apply(&set(3, &["a"])), Err(SymbolicError::OutsideDomain(w("ac"))));
    }

    #[test]
    fn powers() {
        let id = map(2, &[("a", "a"), ("b", "b")]);
        assert_eq!(id.power(5).unwrap().simplified(), id.simplified());
        let shift = map(2, &[("a", "aa"), ("b", "ab")]);
        let expected = map(2, &[("a", "aaa"), ("b", "aab")]);
        assert_eq!(shift.power(2).unwrap(), expected.simplified());
        // the merged form is the single rewrite ε ↦ aa
        assert_eq!(expected.simplified().pairs(), &[(w("."), w("aa"))]);
        assert_eq!(shift.power(0).unwrap(), PrefixInjection::identity(&PrefixSet::full(2)));
    }

    #[test]
    fn four_pair_map_squares_to_identity() {
        let f = four_pair();
        let sq = f.then(&f).unwrap();
        assert_eq!(sq, map(3, &[("aa", "aa"), ("ab", "ab"), ("b", "b"), ("c", "c")]));
        // pointwise at depth 6 over the domain
        let mut words = vec![Word::empty()];
        for _ in 0..6 {
            words = words.iter().flat_map(|u| (0..3).map(move |a| u.child(a))).collect();
        }
        for x in words.iter().filter(|x| f.apply_word(x).is_some()) {
            let once = f.apply_word(x).unwrap();
            assert_eq!(f.apply_word(&once), sq.apply_word(x));
        }
    }

    #[test]
    fn composition_requires_matching_domain() {
        let f = map(2, &[("a", "b")]);
        let g = map(2, &[("a", "a")]);
        assert_eq!(f.then(&g), Err(SymbolicError::NotComposable(w("b"))));
        let shift = map(2, &[("a", "aa"), ("b", "ab")]);
        assert_eq!(
            shift.then_with_budget(&shift, 1),
            Err(SymbolicError::BudgetExceeded { limit: 1 })
        );
    }
}
