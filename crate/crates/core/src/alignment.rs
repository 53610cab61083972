//! Ontology alignments: typed correspondences between the concepts of two
//! ontologies, their TSV exchange format, reification into RDF, and
//! version-to-version deltas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::{Term, Triple, TripleSet};

/// Default prefix for reified statement nodes and their predicates.
pub const DEFAULT_BASE_IRI: &str = "urn:align:";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlignmentError {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("duplicate correspondence for pair ({left}, {right})")]
    DuplicatePair { left: String, right: String },
    #[error("correspondence endpoints must differ: {0}")]
    SelfCorrespondence(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Equivalent,
    LessGeneral,
    MoreGeneral,
}

impl Relation {
    pub const ALL: [Relation; 3] = [
        Relation::Equivalent,
        Relation::LessGeneral,
        Relation::MoreGeneral,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equivalent => "=",
            Relation::LessGeneral => "<",
            Relation::MoreGeneral => ">",
        }
    }

    fn local_name(self) -> &'static str {
        match self {
            Relation::Equivalent => "Equivalent",
            Relation::LessGeneral => "LessGeneral",
            Relation::MoreGeneral => "MoreGeneral",
        }
    }

    /// IRI of the relation node used in reified statements.
    pub fn iri(self, base: &str) -> String {
        format!("{base}{}", self.local_name())
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "=" => Ok(Relation::Equivalent),
            "<" => Ok(Relation::LessGeneral),
            ">" => Ok(Relation::MoreGeneral),
            other => Err(format!("unknown relation symbol {other:?}")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// (left concept, right concept): the identity of a correspondence.
pub type ConceptPair = (String, String);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    pub left: String,
    pub right: String,
    pub relation: Relation,
}

impl Correspondence {
    pub fn new(left: impl Into<String>, right: impl Into<String>, relation: Relation) -> Self {
        Correspondence {
            left: left.into(),
            right: right.into(),
            relation,
        }
    }

    pub fn pair(&self) -> ConceptPair {
        (self.left.clone(), self.right.clone())
    }
}

/// A set of correspondences keyed by their (left, right) pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    map: BTreeMap<ConceptPair, Relation>,
}

impl Alignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails if the pair is already present or both endpoints are equal.
    pub fn insert(&mut self, c: Correspondence) -> Result<(), AlignmentError> {
        if c.left == c.right {
            return Err(AlignmentError::SelfCorrespondence(c.left));
        }
        let key = (c.left, c.right);
        if self.map.contains_key(&key) {
            return Err(AlignmentError::DuplicatePair {
                left: key.0,
                right: key.1,
            });
        }
        self.map.insert(key, c.relation);
        Ok(())
    }

    /// Inserts or replaces the relation for a pair.
    pub fn set(&mut self, c: Correspondence) {
        assert_ne!(c.left, c.right, "correspondence endpoints must differ");
        self.map.insert((c.left, c.right), c.relation);
    }

    pub fn remove_pair(&mut self, left: &str, right: &str) -> Option<Relation> {
        self.map.remove(&(left.to_string(), right.to_string()))
    }

    pub fn relation(&self, left: &str, right: &str) -> Option<Relation> {
        self.map
            .get(&(left.to_string(), right.to_string()))
            .copied()
    }

    pub fn contains(&self, c: &Correspondence) -> bool {
        self.relation(&c.left, &c.right) == Some(c.relation)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Correspondences sorted by (left, right).
    pub fn iter(&self) -> impl Iterator<Item = Correspondence> + '_ {
        self.map
            .iter()
            .map(|((l, r), &rel)| Correspondence::new(l.clone(), r.clone(), rel))
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for c in self.iter() {
            out.push_str(&format!("{}\t{}\t{}\n", c.left, c.right, c.relation));
        }
        out
    }
}

impl FromIterator<Correspondence> for Alignment {
    /// Later correspondences for the same pair replace earlier ones.
    fn from_iter<I: IntoIterator<Item = Correspondence>>(iter: I) -> Self {
        let mut a = Alignment::new();
        for c in iter {
            a.set(c);
        }
        a
    }
}

/// Parses `left<TAB>right<TAB>relation` lines; `#` starts a comment line.
pub fn parse_alignment(text: &str) -> Result<Alignment, AlignmentError> {
    let mut alignment = Alignment::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end_matches('\r');
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let malformed = |reason: String| AlignmentError::MalformedLine { line, reason };
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 3 {
            return Err(malformed(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let iri = |s: &str, what: &str| -> Result<String, AlignmentError> {
            let s = s.trim();
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                Err(malformed(format!("invalid {what} IRI {s:?}")))
            } else {
                Ok(s.to_string())
            }
        };
        let left = iri(fields[0], "left")?;
        let right = iri(fields[1], "right")?;
        let relation: Relation = fields[2].trim().parse().map_err(malformed)?;
        if left == right {
            return Err(malformed("left and right concepts are identical".into()));
        }
        alignment.insert(Correspondence::new(left, right, relation))?;
    }
    Ok(alignment)
}

/// Statement IRI of the correspondence at sorted position `i`.
pub fn statement_iri(base: &str, i: usize) -> String {
    format!("{base}stmt/{i}")
}

/// Each correspondence paired with its statement IRI, in reification order.
pub fn statement_index(alignment: &Alignment, base: &str) -> Vec<(Correspondence, String)> {
    alignment
        .iter()
        .enumerate()
        .map(|(i, c)| (c, statement_iri(base, i)))
        .collect()
}

/// Encodes every correspondence as a statement node with `left`, `right`
/// and `relation` edges. Statement nodes are one hop from both endpoints.
pub fn reify(alignment: &Alignment, base: &str) -> TripleSet {
    let left = Term::iri(format!("{base}left"));
    let right = Term::iri(format!("{base}right"));
    let relation = Term::iri(format!("{base}relation"));
    let mut out = TripleSet::new();
    for (c, stmt) in statement_index(alignment, base) {
        let s = Term::iri(stmt);
        out.insert(Triple::new(s.clone(), left.clone(), Term::iri(c.left)));
        out.insert(Triple::new(s.clone(), right.clone(), Term::iri(c.right)));
        out.insert(Triple::new(
            s,
            relation.clone(),
            Term::iri(c.relation.iri(base)),
        ));
    }
    out
}

/// What changed between two alignment versions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlignmentDelta {
    pub removed: BTreeSet<Correspondence>,
    pub added: BTreeSet<Correspondence>,
    pub changed_pairs: BTreeSet<ConceptPair>,
}

impl AlignmentDelta {
    pub fn is_empty(&self) -> bool {
        self.removed.is_empty() && self.added.is_empty()
    }
}

/// A relation change on a pair shows up as one removal plus one addition.
pub fn diff_alignments(old: &Alignment, new: &Alignment) -> AlignmentDelta {
    let removed: BTreeSet<Correspondence> = old.iter().filter(|c| !new.contains(c)).collect();
    let added: BTreeSet<Correspondence> = new.iter().filter(|c| !old.contains(c)).collect();
    let changed_pairs = removed
        .iter()
        .chain(&added)
        .map(Correspondence::pair)
        .collect();
    AlignmentDelta {
        removed,
        added,
        changed_pairs,
    }
}
