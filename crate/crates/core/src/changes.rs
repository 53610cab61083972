//! Per-resource ontology diffs and their alignment-impact labels.
//!
//! A change is labeled [`ImpactLabel::AffectsAlignment`] when a changed
//! alignment statement lies within `radius` undirected hops of the changed
//! resource in the old merged graph (ontologies plus reified alignment).
//! Changes with no statement node inside the radius are not emitted.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alignment::{AlignmentDelta, ConceptPair, Correspondence};
use crate::rdf::{Graph, NodeId, Term, TripleSet};

pub const DEFAULT_RADIUS: usize = 2;

#[derive(Debug, Error)]
pub enum ChangeError {
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("labels file line {line}: {reason}")]
    BadRecord { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    O1,
    O2,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::O1 => "O1",
            Side::O2 => "O2",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "O1" | "o1" => Ok(Side::O1),
            "O2" | "o2" => Ok(Side::O2),
            other => Err(format!("unknown side {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChangeKind {
    Added,
    Removed,
    Modified,
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChangeKind::Added => "Added",
            ChangeKind::Removed => "Removed",
            ChangeKind::Modified => "Modified",
        })
    }
}

impl FromStr for ChangeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Added" => Ok(ChangeKind::Added),
            "Removed" => Ok(ChangeKind::Removed),
            "Modified" => Ok(ChangeKind::Modified),
            other => Err(format!("unknown change kind {other:?}")),
        }
    }
}

/// The triples that changed around one resource in one ontology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeRecord {
    pub resource: String,
    pub side: Side,
    pub kind: ChangeKind,
    pub added_triples: TripleSet,
    pub removed_triples: TripleSet,
}

/// The binary class predicted by the classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ImpactLabel {
    AffectsAlignment,
    NoEffect,
}

impl ImpactLabel {
    pub const BOTH: [ImpactLabel; 2] = [ImpactLabel::AffectsAlignment, ImpactLabel::NoEffect];

    pub fn is_positive(self) -> bool {
        self == ImpactLabel::AffectsAlignment
    }

    pub fn from_positive(positive: bool) -> Self {
        if positive {
            ImpactLabel::AffectsAlignment
        } else {
            ImpactLabel::NoEffect
        }
    }
}

impl fmt::Display for ImpactLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImpactLabel::AffectsAlignment => "AffectsAlignment",
            ImpactLabel::NoEffect => "NoEffect",
        })
    }
}

impl FromStr for ImpactLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "AffectsAlignment" => Ok(ImpactLabel::AffectsAlignment),
            "NoEffect" => Ok(ImpactLabel::NoEffect),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChange {
    pub change: ChangeRecord,
    pub label: ImpactLabel,
    pub nearest_statement_distance: usize,
}

/// Triple-level diff grouped by every IRI mentioned as subject or object.
///
/// Records come back sorted by resource.
pub fn diff_ontologies(old: &TripleSet, new: &TripleSet, side: Side) -> Vec<ChangeRecord> {
    let added = new.difference(old);
    let removed = old.difference(new);
    if added.is_empty() && removed.is_empty() {
        return Vec::new();
    }

    let mut groups: BTreeMap<&str, (TripleSet, TripleSet)> = BTreeMap::new();
    for (set, is_added) in [(&added, true), (&removed, false)] {
        for t in set {
            let mut resources = vec![t.subject.as_iri()];
            if t.object != t.subject {
                resources.push(t.object.as_iri());
            }
            for r in resources.into_iter().flatten() {
                let entry = groups.entry(r).or_default();
                if is_added {
                    entry.0.insert(t.clone());
                } else {
                    entry.1.insert(t.clone());
                }
            }
        }
    }

    let old_mentions = mentioned_iris(old);
    let new_mentions = mentioned_iris(new);
    groups
        .into_iter()
        .map(|(resource, (added_triples, removed_triples))| {
            let in_old = old_mentions.contains(resource);
            let in_new = new_mentions.contains(resource);
            let kind = match (in_old, in_new) {
                (false, _) => ChangeKind::Added,
                (true, false) => ChangeKind::Removed,
                (true, true) => ChangeKind::Modified,
            };
            ChangeRecord {
                resource: resource.to_string(),
                side,
                kind,
                added_triples,
                removed_triples,
            }
        })
        .collect()
}

fn mentioned_iris(set: &TripleSet) -> HashSet<&str> {
    set.iter()
        .flat_map(|t| [t.subject.as_iri(), t.object.as_iri()])
        .flatten()
        .collect()
}

/// Reconstructs the new version from the old one and its change records.
pub fn apply_changes(old: &TripleSet, changes: &[ChangeRecord]) -> TripleSet {
    let mut out = old.clone();
    for c in changes {
        for t in &c.removed_triples {
            out.remove(t);
        }
    }
    for c in changes {
        out.extend(c.added_triples.iter().cloned());
    }
    out
}

/// Statement nodes of the old alignment, resolved in the old merged graph.
#[derive(Debug, Clone, Default)]
pub struct StatementNodes {
    by_node: HashMap<NodeId, ConceptPair>,
}

impl StatementNodes {
    /// Resolves statement IRIs (as produced by `alignment::statement_index`).
    pub fn resolve(graph: &Graph, index: &[(Correspondence, String)]) -> Result<Self, ChangeError> {
        let mut by_node = HashMap::with_capacity(index.len());
        for (c, iri) in index {
            let node = graph.node_by_iri(iri).ok_or_else(|| {
                ChangeError::InconsistentInput(format!("statement node {iri} not in graph"))
            })?;
            by_node.insert(node, c.pair());
        }
        Ok(StatementNodes { by_node })
    }

    pub fn from_nodes(
        graph: &Graph,
        nodes: impl IntoIterator<Item = (ConceptPair, NodeId)>,
    ) -> Result<Self, ChangeError> {
        let mut by_node = HashMap::new();
        for (pair, node) in nodes {
            if !graph.contains(node) {
                return Err(ChangeError::InconsistentInput(format!(
                    "statement node {} for ({}, {}) not in graph",
                    node.0, pair.0, pair.1
                )));
            }
            by_node.insert(node, pair);
        }
        Ok(StatementNodes { by_node })
    }

    pub fn pair(&self, node: NodeId) -> Option<&ConceptPair> {
        self.by_node.get(&node)
    }

    pub fn len(&self) -> usize {
        self.by_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_node.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct LabelingOutcome {
    pub labeled: Vec<LabeledChange>,
    /// Changes with no anchor node in the old graph.
    pub unanchored: usize,
    /// Anchored changes with no statement node within the radius.
    pub out_of_radius: usize,
}

impl LabelingOutcome {
    pub fn positives(&self) -> usize {
        self.labeled
            .iter()
            .filter(|l| l.label.is_positive())
            .count()
    }
}

/// BFS sources for a change: the resource itself, or the old-graph nodes
/// mentioned by its triples at distance 1 when the resource is absent.
pub fn anchors(change: &ChangeRecord, graph: &Graph) -> Vec<(NodeId, usize)> {
    if let Some(n) = graph.node_by_iri(&change.resource) {
        return vec![(n, 0)];
    }
    let mut out: Vec<(NodeId, usize)> = change
        .added_triples
        .iter()
        .chain(&change.removed_triples)
        .flat_map(|t| [&t.subject, &t.object])
        .filter(|term| term.as_iri() != Some(change.resource.as_str()))
        .filter_map(|term: &Term| graph.node(term))
        .map(|n| (n, 1))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Labels each change by the alignment statements near it.
///
/// Output is sorted by (resource, side) independently of input order.
pub fn label_changes(
    changes: &[ChangeRecord],
    old_graph: &Graph,
    delta: &AlignmentDelta,
    statements: &StatementNodes,
    radius: usize,
) -> Result<LabelingOutcome, ChangeError> {
    if let Some(bad) = statements.by_node.keys().find(|n| !old_graph.contains(**n)) {
        return Err(ChangeError::InconsistentInput(format!(
            "statement node {} not in graph",
            bad.0
        )));
    }

    enum Outcome {
        Unanchored,
        OutOfRadius,
        Labeled(LabeledChange),
    }

    let results: Vec<Outcome> = changes
        .par_iter()
        .map(|change| {
            let sources = anchors(change, old_graph);
            if sources.is_empty() {
                return Outcome::Unanchored;
            }
            let dist = old_graph.bfs_from(&sources, radius);
            let mut nearest: Option<usize> = None;
            let mut affected = false;
            for (node, d) in dist {
                if let Some(pair) = statements.pair(node) {
                    nearest = Some(nearest.map_or(d, |n| n.min(d)));
                    affected |= delta.changed_pairs.contains(pair);
                }
            }
            match nearest {
                None => Outcome::OutOfRadius,
                Some(d) => Outcome::Labeled(LabeledChange {
                    change: change.clone(),
                    label: ImpactLabel::from_positive(affected),
                    nearest_statement_distance: d,
                }),
            }
        })
        .collect();

    let mut outcome = LabelingOutcome::default();
    for r in results {
        match r {
            Outcome::Unanchored => outcome.unanchored += 1,
            Outcome::OutOfRadius => outcome.out_of_radius += 1,
            Outcome::Labeled(l) => outcome.labeled.push(l),
        }
    }
    outcome.labeled.sort_by(|a, b| {
        (&a.change.resource, a.change.side).cmp(&(&b.change.resource, b.change.side))
    });
    Ok(outcome)
}

pub const LABELS_CSV_HEADER: [&str; 7] = [
    "resource",
    "side",
    "kind",
    "distance",
    "label",
    "num_added",
    "num_removed",
];

/// Writes `resource,side,kind,distance,label,num_added,num_removed`.
pub fn write_labels_csv<W: Write>(labels: &[LabeledChange], out: W) -> Result<(), ChangeError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LABELS_CSV_HEADER)?;
    for l in labels {
        w.write_record([
            l.change.resource.clone(),
            l.change.side.to_string(),
            l.change.kind.to_string(),
            l.nearest_statement_distance.to_string(),
            l.label.to_string(),
            l.change.added_triples.len().to_string(),
            l.change.removed_triples.len().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row of a labels CSV (triples are not persisted, only their counts).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRow {
    pub resource: String,
    pub side: Side,
    pub kind: ChangeKind,
    pub distance: usize,
    pub label: ImpactLabel,
    pub num_added: usize,
    pub num_removed: usize,
}

impl From<&LabeledChange> for LabelRow {
    fn from(l: &LabeledChange) -> Self {
        LabelRow {
            resource: l.change.resource.clone(),
            side: l.change.side,
            kind: l.change.kind,
            distance: l.nearest_statement_distance,
            label: l.label,
            num_added: l.change.added_triples.len(),
            num_removed: l.change.removed_triples.len(),
        }
    }
}

pub fn read_labels_csv<R: std::io::Read>(input: R) -> Result<Vec<LabelRow>, ChangeError> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let bad = |reason: String| ChangeError::BadRecord { line, reason };
        if rec.len() != LABELS_CSV_HEADER.len() {
            return Err(bad(format!("expected 7 fields, found {}", rec.len())));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| bad(e.to_string()));
        rows.push(LabelRow {
            resource: rec[0].to_string(),
            side: rec[1].parse().map_err(bad)?,
            kind: rec[2].parse().map_err(bad)?,
            distance: num(&rec[3])?,
            label: rec[4].parse().map_err(bad)?,
            num_added: num(&rec[5])?,
            num_removed: num(&rec[6])?,
        });
    }
    Ok(rows)
}
