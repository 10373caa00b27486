use std::fmt;

use serde::{Serialize, Serializer};

use super::SymbolicError;

/// A finite word over `{0, .., k-1}`. The cylinder `Z(u)` is the set of
/// right-infinite words that start with `u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Prefix-comparable words have intersecting cylinders.
    pub fn is_comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn child(&self, letter: u8) -> Word {
        let mut letters = Vec::with_capacity(self.0.len() + 1);
        letters.extend_from_slice(&self.0);
        letters.push(letter);
        Word(letters)
    }

    pub fn parent(&self) -> Option<Word> {
        self.0.split_last().map(|(_, init)| Word(init.to_vec()))
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `self · suffix`.
    pub fn concat(&self, suffix: &[u8]) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(suffix);
        Word(letters)
    }

    /// The part of `self` after `prefix`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<&[u8]> {
        self.0.strip_prefix(prefix.0.as_slice())
    }

    /// All prefixes, shortest first, including the empty word and `self`.
    pub fn prefixes(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..=self.0.len()).map(move |l| &self.0[..l])
    }
}

/// Renders with the default letters `a, b, c, ..`; `.` is the empty word.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        for &l in &self.0 {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An ordered set of ASCII letters; position `i` spells letter `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self, SymbolicError> {
        let chars: Vec<char> = letters.chars().collect();
        if chars.len() < 2 || chars.len() > 26 {
            return Err(SymbolicError::BadAlphabet(letters.to_string()));
        }
        for (i, c) in chars.iter().enumerate() {
            if !c.is_ascii_alphabetic() || chars[..i].contains(c) {
                return Err(SymbolicError::BadAlphabet(letters.to_string()));
            }
        }
        Ok(Alphabet { letters: chars })
    }

    /// `a, b, ..` up to size `k`.
    pub fn standard(k: usize) -> Self {
        assert!((2..=26).contains(&k), "alphabet size must be in 2..=26");
        Alphabet { letters: (0..k as u8).map(|i| (b'a' + i) as char).collect() }
    }

    pub fn size(&self) -> u8 {
        self.letters.len() as u8
    }

    pub fn letters(&self) -> String {
        self.letters.iter().collect()
    }

    /// Parses a letter string; `.` is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, SymbolicError> {
        if text == "." {
            return Ok(Word::empty());
        }
        text.chars()
            .map(|c| {
                self.letters
                    .iter()
                    .position(|&l| l == c)
                    .map(|i| i as u8)
                    .ok_or(SymbolicError::UnknownLetter(c))
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Word)
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return ".".to_string();
        }
        word.letters().iter().map(|&l| self.letters[l as usize]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let ab = Alphabet::new("xy").unwrap();
        let w = ab.parse_word("yxy").unwrap();
        assert_eq!(w.letters(), &[1, 0, 1]);
        assert_eq!(ab.format_word(&w), "yxy");
        assert_eq!(ab.parse_word(".").unwrap(), Word::empty());
        assert_eq!(ab.format_word(&Word::empty()), ".");
        assert_eq!(ab.parse_word("xz"), Err(SymbolicError::UnknownLetter('z')));
        assert!(Alphabet::new("a").is_err());
        assert!(Alphabet::new("aa").is_err());
        assert!(Alphabet::new("a1").is_err());
    }

    #[test]
    fn prefix_relations() {
        let a = Word::from_letters([0]);
        let ab = Word::from_letters([0, 1]);
        let b = Word::from_letters([1]);
        assert!(a.is_prefix_of(&ab));
        assert!(Word::empty().is_prefix_of(&a));
        assert!(a.is_comparable(&ab) && ab.is_comparable(&a));
        assert!(!a.is_comparable(&b));
        assert_eq!(ab.parent(), Some(a.clone()));
        assert_eq!(ab.strip_prefix(&a), Some(&[1u8][..]));
        assert_eq!(a.child(1), ab);
        assert_eq!(ab.to_string(), "ab");
        assert_eq!(ab.prefixes().count(), 3);
    }
}
