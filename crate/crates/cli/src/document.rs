//! Plain-text input documents: parsing, validation and canonical
//! serialization.
//!
//! ```text
//! SEMILATTICE n        INVSGP n             BLOCKS alphabet=ab
//! <n rows of n>        <n rows of n>        UNIVERSE .
//!                      ZERO z               BLOCK X1: a
//!                                           MAP a -> aa
//! ```
//!
//! `#` starts a comment that runs to the end of the line; `.` is the empty
//! word.

use std::fmt::{self, Write as _};

use contracta::lattice::{FiniteSemilattice, LatticeError};
use contracta::semigroup::{FiniteInverseSemigroup, SemigroupError};
use contracta::symbolic::{Alphabet, BlockSystem, RawBlockSystem, SymbolicError, Word};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    #[serde(rename = "SEMILATTICE")]
    Semilattice,
    #[serde(rename = "INVSGP")]
    InverseSemigroup,
    #[serde(rename = "BLOCKS")]
    Blocks,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Semilattice => "SEMILATTICE",
            Kind::InverseSemigroup => "INVSGP",
            Kind::Blocks => "BLOCKS",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Semilattice { table: Vec<Vec<usize>> },
    InverseSemigroup { table: Vec<Vec<usize>>, zero: usize },
    Blocks(RawBlockSystem),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Semilattice { .. } => Kind::Semilattice,
            Document::InverseSemigroup { .. } => Kind::InverseSemigroup,
            Document::Blocks(_) => Kind::Blocks,
        }
    }
}

/// A parsed document with the line numbers of its `MAP` lines, used to point
/// validation errors back at the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub document: Document,
    pub map_lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("input is empty")]
    Empty,
    #[error("line {line}: unknown header {found:?}")]
    UnknownHeader { line: usize, found: String },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Blocks(#[from] SymbolicError),
    #[error("MAP lines {first} and {second} have prefix-comparable sources")]
    NotPrefixFree { first: usize, second: usize },
    #[error("MAP lines {first} and {second} have prefix-comparable targets")]
    NotInjective { first: usize, second: usize },
    #[error("block {name} is empty")]
    EmptyBlock { name: String },
    #[error("blocks {first} and {second} overlap")]
    BlocksOverlap { first: String, second: String },
}

/// A validated document.
#[derive(Debug, Clone)]
pub enum Validated {
    Semilattice(FiniteSemilattice),
    InverseSemigroup(FiniteInverseSemigroup),
    Blocks { system: BlockSystem, redundant: Vec<Word> },
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
    /// Column just past the last token, for "expected more" errors.
    end: usize,
}

impl Line<'_> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.number, column, message: message.into() }
    }
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens = tokens(body);
            let end = body.trim_end().chars().count() + 1;
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens, end })
        })
        .collect()
}

fn parse_index(line: &Line<'_>, (column, text): (usize, &str)) -> Result<usize, ParseError> {
    text.parse()
        .map_err(|_| line.error(column, format!("expected a non-negative integer, found {text:?}")))
}

fn parse_size(line: &Line<'_>, keyword: &str) -> Result<usize, ParseError> {
    match line.tokens[..] {
        [_, size] => parse_index(line, size),
        [_] => Err(line.error(line.end, format!("{keyword} needs a size"))),
        [_, _, (column, _), ..] => Err(line.error(column, "unexpected token after the size")),
        [] => unreachable!("content lines are nonempty"),
    }
}

fn parse_row(line: &Line<'_>, n: usize) -> Result<Vec<usize>, ParseError> {
    if line.tokens.len() > n {
        return Err(line.error(line.tokens[n].0, format!("row has more than {n} entries")));
    }
    if line.tokens.len() < n {
        return Err(line.error(line.end, format!("row has {} entries, expected {n}", line.tokens.len())));
    }
    line.tokens.iter().map(|&t| parse_index(line, t)).collect()
}

fn parse_table(header: &Line<'_>, body: &[Line<'_>], keyword: &str) -> Result<(Vec<Vec<usize>>, Option<usize>), ParseError> {
    let n = parse_size(header, keyword)?;
    let mut table = Vec::with_capacity(n);
    let mut zero = None;
    for line in body {
        if line.tokens[0].1 == "ZERO" && keyword == "INVSGP" {
            if zero.is_some() {
                return Err(line.error(line.tokens[0].0, "ZERO declared twice"));
            }
            zero = Some(parse_size(line, "ZERO")?);
        } else if table.len() == n {
            return Err(line.error(line.tokens[0].0, format!("unexpected line after {n} rows")));
        } else {
            table.push(parse_row(line, n)?);
        }
    }
    if table.len() < n {
        return Err(missing_line(body, header, &format!("expected {n} rows, found {}", table.len())));
    }
    Ok((table, zero))
}

fn parse_words(line: &Line<'_>, alphabet: &Alphabet, tokens: &[(usize, &str)]) -> Result<Vec<Word>, ParseError> {
    tokens
        .iter()
        .map(|&(column, text)| {
            alphabet.parse_word(text).map_err(|e| line.error(column, format!("bad word {text:?}: {e}")))
        })
        .collect()
}

fn parse_blocks(header: &Line<'_>, body: &[Line<'_>]) -> Result<Parsed, ParseError> {
    let alphabet = match header.tokens[..] {
        [_, (column, spec)] => {
            let letters = spec
                .strip_prefix("alphabet=")
                .ok_or_else(|| header.error(column, "expected alphabet=<letters>"))?;
            Alphabet::new(letters).map_err(|e| header.error(column, e.to_string()))?
        }
        [_] => return Err(header.error(header.end, "BLOCKS needs alphabet=<letters>")),
        [_, _, (column, _), ..] => return Err(header.error(column, "unexpected token in header")),
        [] => unreachable!("content lines are nonempty"),
    };
    let mut universe = None;
    let mut blocks = Vec::new();
    let mut map = Vec::new();
    let mut map_lines = Vec::new();
    for line in body {
        let (column, keyword) = line.tokens[0];
        match keyword {
            "UNIVERSE" => {
                if universe.is_some() {
                    return Err(line.error(column, "UNIVERSE declared twice"));
                }
                universe = Some(parse_words(line, &alphabet, &line.tokens[1..])?);
            }
            "BLOCK" => {
                let Some(&(name_column, name)) = line.tokens.get(1) else {
                    return Err(line.error(line.end, "BLOCK needs a name"));
                };
                // the colon may be attached to the name or stand alone
                let (name, rest) = match name.strip_suffix(':') {
                    Some(name) => (name, &line.tokens[2..]),
                    None if line.tokens.get(2).map(|t| t.1) == Some(":") => (name, &line.tokens[3..]),
                    None => return Err(line.error(name_column, "expected `BLOCK <name>:`")),
                };
                if name.is_empty() || name.contains(':') {
                    return Err(line.error(name_column, format!("bad block name {name:?}")));
                }
                blocks.push((name.to_string(), parse_words(line, &alphabet, rest)?));
            }
            "MAP" => match line.tokens[..] {
                [_, u, (_, "->"), v] => {
                    let mut pair = parse_words(line, &alphabet, &[u, v])?;
                    let v = pair.pop().expect("two words");
                    let u = pair.pop().expect("two words");
                    map.push((u, v));
                    map_lines.push(line.number);
                }
                _ => return Err(line.error(column, "expected `MAP <word> -> <word>`")),
            },
            other => return Err(line.error(column, format!("unknown directive {other:?}"))),
        }
    }
    let universe = universe.ok_or_else(|| missing_line(body, header, "missing UNIVERSE line"))?;
    let system = RawBlockSystem { alphabet, universe, blocks, map };
    Ok(Parsed { document: Document::Blocks(system), map_lines })
}

fn missing_line(body: &[Line<'_>], header: &Line<'_>, message: &str) -> ParseError {
    let line = body.last().unwrap_or(header).number + 1;
    ParseError::Syntax { line, column: 1, message: message.to_string() }
}

pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let lines = content_lines(text);
    let (header, body) = lines.split_first().ok_or(ParseError::Empty)?;
    let keyword = header.tokens[0].1;
    let document = match keyword {
        "SEMILATTICE" => {
            let (table, _) = parse_table(header, body, keyword)?;
            Document::Semilattice { table }
        }
        "INVSGP" => {
            let (table, zero) = parse_table(header, body, keyword)?;
            Document::InverseSemigroup { table, zero: zero.unwrap_or(0) }
        }
        "BLOCKS" => return parse_blocks(header, body),
        other => return Err(ParseError::UnknownHeader { line: header.number, found: other.to_string() }),
    };
    Ok(Parsed { document, map_lines: Vec::new() })
}

impl Parsed {
    /// Validates with the engine for the document's kind. `adjoin_zero`
    /// extends a semigroup table by a new absorbing element, which becomes
    /// the zero.
    pub fn validate(&self, adjoin_zero: bool) -> Result<Validated, ValidationError> {
        match &self.document {
            Document::Semilattice { table } => Ok(Validated::Semilattice(FiniteSemilattice::from_table(table)?)),
            Document::InverseSemigroup { table, zero } => {
                let semigroup = if adjoin_zero {
                    FiniteInverseSemigroup::from_table(&FiniteInverseSemigroup::adjoin_zero(table), table.len())?
                } else {
                    FiniteInverseSemigroup::from_table(table, *zero)?
                };
                Ok(Validated::InverseSemigroup(semigroup))
            }
            Document::Blocks(raw) => {
                let name = |i: usize| raw.blocks[i].0.clone();
                let line = |i: usize| self.map_lines.get(i).copied().unwrap_or(i + 1);
                match BlockSystem::validate_with_warnings(raw.clone()) {
                    Ok((system, redundant)) => Ok(Validated::Blocks { system, redundant }),
                    Err(SymbolicError::NotPrefixFree { first, second }) => {
                        Err(ValidationError::NotPrefixFree { first: line(first), second: line(second) })
                    }
                    Err(SymbolicError::NotInjective { first, second }) => {
                        Err(ValidationError::NotInjective { first: line(first), second: line(second) })
                    }
                    Err(SymbolicError::EmptyBlock(i)) => Err(ValidationError::EmptyBlock { name: name(i) }),
                    Err(SymbolicError::BlocksOverlap(i, j)) => {
                        Err(ValidationError::BlocksOverlap { first: name(i), second: name(j) })
                    }
                    Err(e) => Err(e.into()),
                }
            }
        }
    }
}

fn write_table(out: &mut String, table: &[Vec<usize>]) {
    for row in table {
        let cells: Vec<String> = row.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
}

fn write_words(out: &mut String, alphabet: &Alphabet, words: &[Word]) {
    for w in words {
        let _ = write!(out, " {}", alphabet.format_word(w));
    }
}

/// Canonical text of a document; parsing it gives the document back.
pub fn serialize(document: &Document) -> String {
    let mut out = String::new();
    match document {
        Document::Semilattice { table } => {
            let _ = writeln!(out, "SEMILATTICE {}", table.len());
            write_table(&mut out, table);
        }
        Document::InverseSemigroup { table, zero } => {
            let _ = writeln!(out, "INVSGP {}", table.len());
            write_table(&mut out, table);
            if *zero != 0 {
                let _ = writeln!(out, "ZERO {zero}");
            }
        }
        Document::Blocks(raw) => {
            let a = &raw.alphabet;
            let _ = writeln!(out, "BLOCKS alphabet={}", a.letters());
            out.push_str("UNIVERSE");
            write_words(&mut out, a, &raw.universe);
            out.push('\n');
            for (name, words) in &raw.blocks {
                let _ = write!(out, "BLOCK {name}:");
                write_words(&mut out, a, words);
                out.push('\n');
            }
            for (u, v) in &raw.map {
                let _ = writeln!(out, "MAP {} -> {}", a.format_word(u), a.format_word(v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_one_based_character_positions() {
        assert_eq!(tokens("  ab  c"), vec![(3, "ab"), (7, "c")]);
        assert_eq!(tokens(""), vec![]);
    }

    #[test]
    fn row_errors_point_at_the_token() {
        let err = parse("SEMILATTICE 2\n0 0\n0 x\n").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 3, column: 3, message: "expected a non-negative integer, found \"x\"".into() });
        let err = parse("SEMILATTICE 2\n0 0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, column: 5, .. }), "{err}");
        let err = parse("SEMILATTICE 2\n0 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, column: 1, .. }), "{err}");
    }

    #[test]
    fn comments_and_zero_lines() {
        let parsed = parse("# unit\nINVSGP 2 # two elements\n0 1\n1 1\nZERO 1\n").unwrap();
        assert_eq!(parsed.document, Document::InverseSemigroup { table: vec![vec![0, 1], vec![1, 1]], zero: 1 });
    }

    #[test]
    fn block_lines() {
        let text = "BLOCKS alphabet=ab\nUNIVERSE .\nBLOCK left : a\nBLOCK right: b\nMAP a -> aa\nMAP b -> ab\n";
        let parsed = parse(text).unwrap();
        let Document::Blocks(raw) = &parsed.document else { panic!() };
        assert_eq!(raw.blocks[0].0, "left");
        assert_eq!(parsed.map_lines, vec![5, 6]);
        assert!(parsed.validate(false).is_ok());
        let err = parse("BLOCKS alphabet=ab\nUNIVERSE .\nMAP a => b\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, column: 1, .. }));
        let err = parse("BLOCKS alphabet=ab\nBLOCK X: a\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }), "{err}");
        let err = parse("BLOCKS alphabet=ab\nUNIVERSE ac\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, column: 10, .. }), "{err}");
    }

    #[test]
    fn map_overlaps_name_both_lines() {
        let text = "BLOCKS alphabet=abc\nUNIVERSE .\nBLOCK X1: .\n# sources overlap\nMAP a -> b\nMAP ab -> c\n";
        let err = parse(text).unwrap().validate(false).unwrap_err();
        assert_eq!(err, ValidationError::NotPrefixFree { first: 5, second: 6 });
    }

    #[test]
    fn adjoining_a_zero() {
        let parsed = parse("INVSGP 2\n0 1\n1 0\n").unwrap();
        assert!(matches!(parsed.validate(false), Err(ValidationError::Semigroup(_))));
        let Validated::InverseSemigroup(s) = parsed.validate(true).unwrap() else { panic!() };
        assert_eq!((s.size(), s.zero()), (3, 2));
    }
}
