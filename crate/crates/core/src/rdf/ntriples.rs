//! Line-oriented N-Triples reader and canonical writer.

use std::collections::btree_set;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::iter::Peekable;
use std::str::CharIndices;

use super::{RdfError, Term, Triple};

/// A set of triples with set semantics. Iteration is in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleSet {
    triples: BTreeSet<Triple>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Triple> {
        self.triples.iter()
    }

    pub fn extend_from(&mut self, other: &TripleSet) {
        self.triples.extend(other.triples.iter().cloned());
    }

    /// Triples in `self` but not in `other`.
    pub fn difference(&self, other: &TripleSet) -> TripleSet {
        self.triples.difference(&other.triples).cloned().collect()
    }

    pub fn is_disjoint(&self, other: &TripleSet) -> bool {
        self.triples.is_disjoint(&other.triples)
    }

    /// Canonical N-Triples: one triple per line in sorted order.
    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            let _ = writeln!(out, "{t}");
        }
        out
    }

    /// Renames every blank node `_:x` to `_:{scope}.x`.
    pub fn scope_blank_nodes(&self, scope: &str) -> TripleSet {
        let rename = |t: &Term| match t {
            Term::Iri(s) if s.starts_with("_:") => Term::Iri(format!("_:{scope}.{}", &s[2..])),
            other => other.clone(),
        };
        self.triples
            .iter()
            .map(|t| Triple::new(rename(&t.subject), t.predicate.clone(), rename(&t.object)))
            .collect()
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        TripleSet {
            triples: iter.into_iter().collect(),
        }
    }
}

impl Extend<Triple> for TripleSet {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter)
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a Triple;
    type IntoIter = btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

impl IntoIterator for TripleSet {
    type Item = Triple;
    type IntoIter = btree_set::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}

/// Parses an N-Triples document. Stops at the first malformed line.
pub fn parse_ntriples(text: &str) -> Result<TripleSet, RdfError> {
    let mut set = TripleSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if let Some(triple) = parse_line(line).map_err(|reason| RdfError::MalformedLine {
            line: line_no,
            reason,
        })? {
            set.insert(triple);
        }
    }
    Ok(set)
}

struct LineParser<'a> {
    chars: Peekable<CharIndices<'a>>,
}

/// `Ok(None)` for blank and comment lines.
fn parse_line(line: &str) -> Result<Option<Triple>, String> {
    let mut p = LineParser {
        chars: line.char_indices().peekable(),
    };
    p.skip_ws();
    match p.peek() {
        None | Some('#') => return Ok(None),
        _ => {}
    }
    let subject = match p.peek() {
        Some('<') => Term::Iri(p.iri()?),
        Some('_') => Term::Iri(p.blank()?),
        _ => return Err("subject must be an IRI or blank node".into()),
    };
    p.require_ws("predicate")?;
    let predicate = match p.peek() {
        Some('<') => Term::Iri(p.iri()?),
        None => return Err("missing predicate".into()),
        _ => return Err("predicate must be an IRI".into()),
    };
    p.require_ws("object")?;
    let object = match p.peek() {
        Some('<') => Term::Iri(p.iri()?),
        Some('_') => Term::Iri(p.blank()?),
        Some('"') => p.literal()?,
        None => return Err("missing object".into()),
        Some(c) => return Err(format!("unexpected character {c:?} at start of object")),
    };
    p.skip_ws();
    match p.next() {
        Some('.') => {}
        None => return Err("missing terminating '.'".into()),
        Some(c) => return Err(format!("expected '.', found {c:?}")),
    }
    p.skip_ws();
    match p.peek() {
        None | Some('#') => Ok(Some(Triple::new(subject, predicate, object))),
        Some(c) => Err(format!("trailing content starting with {c:?}")),
    }
}

impl LineParser<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn next(&mut self) -> Option<char> {
        self.chars.next().map(|(_, c)| c)
    }

    fn skip_ws(&mut self) -> bool {
        let mut any = false;
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.next();
            any = true;
        }
        any
    }

    fn require_ws(&mut self, what: &str) -> Result<(), String> {
        if self.skip_ws() {
            Ok(())
        } else if self.peek().is_none() {
            Err(format!("missing {what}"))
        } else {
            Err(format!("expected whitespace before {what}"))
        }
    }

    fn iri(&mut self) -> Result<String, String> {
        self.next(); // '<'
        let mut out = String::new();
        loop {
            match self.next() {
                None => return Err("unterminated IRI".into()),
                Some('>') => break,
                Some('\\') => {
                    let c = match self.next() {
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return Err("invalid escape in IRI".into()),
                    };
                    if c.is_whitespace() {
                        return Err("escaped whitespace in IRI".into());
                    }
                    out.push(c);
                }
                Some(c)
                    if c.is_whitespace()
                        || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') =>
                {
                    return Err(format!("invalid character {c:?} in IRI"))
                }
                Some(c) => out.push(c),
            }
        }
        if out.is_empty() {
            return Err("empty IRI".into());
        }
        Ok(out)
    }

    fn blank(&mut self) -> Result<String, String> {
        self.next(); // '_'
        if self.next() != Some(':') {
            return Err("blank node label must start with '_:'".into());
        }
        let is_label_char = |c: char| c.is_alphanumeric() || c == '_' || c == '-';
        let mut label = String::new();
        loop {
            match self.peek() {
                Some(c) if is_label_char(c) => {
                    label.push(c);
                    self.next();
                }
                // '.' may appear inside a label but never ends one.
                Some('.') => {
                    let mut ahead = self.chars.clone();
                    ahead.next();
                    match ahead.peek() {
                        Some(&(_, c)) if is_label_char(c) => {
                            label.push('.');
                            self.next();
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }
        if label.is_empty() {
            return Err("empty blank node label".into());
        }
        Ok(format!("_:{label}"))
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, String> {
        let mut value = 0u32;
        for _ in 0..digits {
            let d = self
                .next()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| "invalid hex digit in \\u escape".to_string())?;
            value = value * 16 + d;
        }
        char::from_u32(value).ok_or_else(|| format!("invalid code point U+{value:X}"))
    }

    fn literal(&mut self) -> Result<Term, String> {
        self.next(); // '"'
        let mut lexical = String::new();
        loop {
            match self.next() {
                None => return Err("unterminated literal".into()),
                Some('"') => break,
                Some('\\') => match self.next() {
                    Some('t') => lexical.push('\t'),
                    Some('b') => lexical.push('\u{8}'),
                    Some('n') => lexical.push('\n'),
                    Some('r') => lexical.push('\r'),
                    Some('f') => lexical.push('\u{c}'),
                    Some('"') => lexical.push('"'),
                    Some('\'') => lexical.push('\''),
                    Some('\\') => lexical.push('\\'),
                    Some('u') => lexical.push(self.hex_escape(4)?),
                    Some('U') => lexical.push(self.hex_escape(8)?),
                    Some(c) => return Err(format!("invalid escape \\{c} in literal")),
                    None => return Err("unterminated literal".into()),
                },
                Some('\n' | '\r') => return Err("raw line break in literal".into()),
                Some(c) => lexical.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.next();
                let mut lang = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        lang.push(c);
                        self.next();
                    } else {
                        break;
                    }
                }
                if lang.is_empty() || !lang.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err("invalid language tag".into());
                }
                Ok(Term::lang_literal(lexical, lang))
            }
            Some('^') => {
                self.next();
                if self.next() != Some('^') || self.peek() != Some('<') {
                    return Err("invalid datatype annotation".into());
                }
                let dt = self.iri()?;
                Ok(Term::typed_literal(lexical, dt))
            }
            _ => Ok(Term::literal(lexical)),
        }
    }
}
