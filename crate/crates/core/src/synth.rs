//! Seeded synthetic ontology-evolution scenarios with known alignment impact.
//!
//! Each side is a random `rdfs:subClassOf` tree with one `rdfs:label` per
//! concept. One subtree per side is *volatile*: edits there are structural
//! (move, delete, insert) and, with probability `p_affect`, also remove or
//! re-type a correspondence next to the edited concept. Edits elsewhere
//! only relabel concepts and never touch the alignment. Concepts at equal
//! depth are paired into the initial alignment, volatile with volatile
//! (depth counted from the subtree root) and stable with stable.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alignment::{Alignment, Correspondence, Relation};
use crate::changes::Side;
use crate::rdf::{Term, Triple, TripleSet, RDFS_LABEL, RDFS_SUBCLASS_OF};
use crate::seeds;

pub const NAMESPACE: &str = "http://synth.example/";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid scenario config: {0}")]
    InvalidConfig(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub concepts_per_ontology: usize,
    /// Mean number of children per inner concept.
    pub branching_factor: usize,
    /// Fraction of depth-matched concept pairs that start aligned.
    pub aligned_fraction: f64,
    /// Share of each ontology placed in the volatile subtree.
    pub volatile_fraction: f64,
    /// Edits per ontology per epoch transition; 0 keeps every snapshot equal.
    pub edits_per_epoch: usize,
    /// Chance that a volatile edit also changes a nearby correspondence.
    pub p_affect: f64,
    /// Number of snapshots.
    pub epochs: usize,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            concepts_per_ontology: 1500,
            branching_factor: 4,
            aligned_fraction: 0.7,
            volatile_fraction: 0.3,
            edits_per_epoch: 300,
            p_affect: 0.8,
            epochs: 3,
            seed: 42,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::InvalidConfig(m.to_string()));
        if self.concepts_per_ontology < 2 {
            return bad("concepts_per_ontology must be >= 2");
        }
        if self.branching_factor == 0 {
            return bad("branching_factor must be >= 1");
        }
        if self.epochs == 0 {
            return bad("epochs must be >= 1");
        }
        for (name, v) in [
            ("aligned_fraction", self.aligned_fraction),
            ("volatile_fraction", self.volatile_fraction),
            ("p_affect", self.p_affect),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(&format!("{name} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// One epoch's ontologies and alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub o1: TripleSet,
    pub o2: TripleSet,
    pub alignment: Alignment,
}

impl Snapshot {
    pub fn ontology(&self, side: Side) -> &TripleSet {
        match side {
            Side::O1 => &self.o1,
            Side::O2 => &self.o2,
        }
    }

    fn ontology_mut(&mut self, side: Side) -> &mut TripleSet {
        match side {
            Side::O1 => &mut self.o1,
            Side::O2 => &mut self.o2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp {
    Relabel {
        concept: String,
        old: String,
        new: String,
    },
    Move {
        concept: String,
        from: String,
        to: String,
    },
    /// Children are reattached to the deleted concept's parent.
    Delete {
        concept: String,
        parent: String,
        label: String,
        children: Vec<String>,
    },
    Insert {
        concept: String,
        parent: String,
        label: String,
    },
    Unalign {
        left: String,
        right: String,
        relation: Relation,
    },
    Realign {
        left: String,
        right: String,
        from: Relation,
        to: Relation,
    },
}

impl EditOp {
    pub fn name(&self) -> &'static str {
        match self {
            EditOp::Relabel { .. } => "relabel",
            EditOp::Move { .. } => "move",
            EditOp::Delete { .. } => "delete",
            EditOp::Insert { .. } => "insert",
            EditOp::Unalign { .. } => "unalign",
            EditOp::Realign { .. } => "realign",
        }
    }

    pub fn is_alignment_edit(&self) -> bool {
        matches!(self, EditOp::Unalign { .. } | EditOp::Realign { .. })
    }

    /// IRIs whose incident triples this edit changes.
    pub fn touched(&self) -> Vec<&str> {
        match self {
            EditOp::Relabel { concept, .. } => vec![concept],
            EditOp::Move { concept, from, to } => vec![concept, from, to],
            EditOp::Delete {
                concept,
                parent,
                children,
                ..
            } => {
                let mut v = vec![concept.as_str(), parent.as_str()];
                v.extend(children.iter().map(String::as_str));
                v
            }
            EditOp::Insert {
                concept, parent, ..
            } => vec![concept, parent],
            EditOp::Unalign { .. } | EditOp::Realign { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub side: Side,
    pub op: EditOp,
    /// For structural edits: a correspondence change was planted next to
    /// this edit. Always true for alignment edits.
    pub planted: bool,
}

fn subclass(child: &str, parent: &str) -> Triple {
    Triple::iris(child, RDFS_SUBCLASS_OF, parent)
}

fn label(concept: &str, text: &str) -> Triple {
    Triple::new(
        Term::iri(concept),
        Term::iri(RDFS_LABEL),
        Term::literal(text),
    )
}

/// Applies one epoch's edits to a snapshot, producing the next one.
pub fn replay(snapshot: &Snapshot, edits: &[Edit]) -> Snapshot {
    let mut s = snapshot.clone();
    for e in edits {
        match &e.op {
            EditOp::Unalign { left, right, .. } => {
                s.alignment.remove_pair(left, right);
            }
            EditOp::Realign {
                left, right, to, ..
            } => {
                s.alignment
                    .set(Correspondence::new(left.clone(), right.clone(), *to));
            }
            op => {
                let o = s.ontology_mut(e.side);
                match op {
                    EditOp::Relabel { concept, old, new } => {
                        o.remove(&label(concept, old));
                        o.insert(label(concept, new));
                    }
                    EditOp::Move { concept, from, to } => {
                        o.remove(&subclass(concept, from));
                        o.insert(subclass(concept, to));
                    }
                    EditOp::Delete {
                        concept,
                        parent,
                        label: text,
                        children,
                    } => {
                        o.remove(&subclass(concept, parent));
                        o.remove(&label(concept, text));
                        for c in children {
                            o.remove(&subclass(c, concept));
                            o.insert(subclass(c, parent));
                        }
                    }
                    EditOp::Insert {
                        concept,
                        parent,
                        label: text,
                    } => {
                        o.insert(subclass(concept, parent));
                        o.insert(label(concept, text));
                    }
                    EditOp::Unalign { .. } | EditOp::Realign { .. } => unreachable!(),
                }
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub snapshots: Vec<Snapshot>,
    /// `edit_log[t]` turns snapshot `t` into snapshot `t + 1`.
    pub edit_log: Vec<Vec<Edit>>,
    /// Per transition: whether each touched resource sits next to a
    /// changed correspondence, judged on the tree at the start of the epoch.
    pub ground_truth: Vec<BTreeMap<(Side, String), bool>>,
    /// Concepts of the volatile subtree at epoch 0, per side.
    pub volatile: [BTreeSet<String>; 2],
}

fn side_index(side: Side) -> usize {
    match side {
        Side::O1 => 0,
        Side::O2 => 1,
    }
}

const SIDES: [Side; 2] = [Side::O1, Side::O2];

#[derive(Clone)]
struct Tree {
    prefix: String,
    parent: Vec<Option<usize>>,
    children: Vec<BTreeSet<usize>>,
    labels: Vec<String>,
    alive: Vec<bool>,
    volatile: Vec<bool>,
    /// Counterpart concept on the other side, if aligned.
    partner: Vec<Option<usize>>,
    volatile_root: Option<usize>,
}

impl Tree {
    fn iri(&self, c: usize) -> String {
        format!("{}C{c}", self.prefix)
    }

    fn new_concept(&mut self, parent: Option<usize>, label: String) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.children.push(BTreeSet::new());
        self.labels.push(label);
        self.alive.push(true);
        self.volatile.push(false);
        self.partner.push(None);
        if let Some(p) = parent {
            self.children[p].insert(id);
        }
        id
    }

    fn in_subtree(&self, mut node: usize, root: usize) -> bool {
        loop {
            if node == root {
                return true;
            }
            match self.parent[node] {
                Some(p) => node = p,
                None => return false,
            }
        }
    }

    fn triples(&self) -> TripleSet {
        let mut out = TripleSet::new();
        for c in (0..self.parent.len()).filter(|&c| self.alive[c]) {
            let iri = self.iri(c);
            out.insert(label(&iri, &self.labels[c]));
            if let Some(p) = self.parent[c] {
                out.insert(subclass(&iri, &self.iri(p)));
            }
        }
        out
    }

    /// The concept, its parent and its children.
    fn closed_neighborhood(&self, c: usize) -> Vec<usize> {
        let mut v = vec![c];
        v.extend(self.parent[c]);
        v.extend(self.children[c].iter().copied());
        v
    }
}

fn random_tree(name: &str, n: usize, branching: usize, rng: &mut ChaCha8Rng) -> Tree {
    let mut t = Tree {
        prefix: format!("{NAMESPACE}{name}/"),
        parent: Vec::new(),
        children: Vec::new(),
        labels: Vec::new(),
        alive: Vec::new(),
        volatile: Vec::new(),
        partner: Vec::new(),
        volatile_root: None,
    };
    t.new_concept(None, format!("{name} concept 0"));
    let mut queue = std::collections::VecDeque::from([0usize]);
    while t.parent.len() < n {
        let p = queue.pop_front().expect("queue refills while growing");
        let k = rng.gen_range(1..=2 * branching - 1);
        for _ in 0..k {
            if t.parent.len() >= n {
                break;
            }
            let id = t.parent.len();
            t.new_concept(Some(p), format!("{name} concept {id}"));
            queue.push_back(id);
        }
    }
    t
}

fn depths(t: &Tree) -> Vec<usize> {
    let mut d = vec![0; t.parent.len()];
    for c in 1..t.parent.len() {
        // Parents precede children in generation order.
        d[c] = d[t.parent[c].expect("non-root")] + 1;
    }
    d
}

/// Marks the non-root subtree whose size is closest to `fraction * n`.
fn mark_volatile(t: &mut Tree, fraction: f64, rng: &mut ChaCha8Rng) {
    let n = t.parent.len();
    let target = (fraction * n as f64).round() as usize;
    if target == 0 {
        return;
    }
    let mut size = vec![1usize; n];
    for c in (1..n).rev() {
        size[t.parent[c].expect("non-root")] += size[c];
    }
    let best = (1..n)
        .map(|c| size[c].abs_diff(target))
        .min()
        .expect("n >= 2");
    let candidates: Vec<usize> = (1..n)
        .filter(|&c| size[c].abs_diff(target) == best)
        .collect();
    let root = *candidates.choose(rng).expect("non-empty");
    t.volatile_root = Some(root);
    for c in 0..n {
        if t.in_subtree(c, root) {
            t.volatile[c] = true;
        }
    }
}

struct Generator {
    trees: [Tree; 2],
    alignment: Alignment,
    p_affect: f64,
}

impl Generator {
    fn pair_iris(&self, side: Side, c: usize) -> Option<(String, String)> {
        let i = side_index(side);
        let other = self.trees[i].partner[c]?;
        let mine = self.trees[i].iri(c);
        let theirs = self.trees[1 - i].iri(other);
        Some(match side {
            Side::O1 => (mine, theirs),
            Side::O2 => (theirs, mine),
        })
    }

    /// Removes or re-types the correspondence of `c`.
    fn change_correspondence(&mut self, side: Side, c: usize, rng: &mut ChaCha8Rng) -> Edit {
        let (left, right) = self.pair_iris(side, c).expect("aligned");
        let relation = self.alignment.relation(&left, &right).expect("present");
        if rng.gen_bool(0.5) {
            return self.unalign(side, c);
        }
        let choices: Vec<Relation> = Relation::ALL
            .into_iter()
            .filter(|r| *r != relation)
            .collect();
        let to = *choices.choose(rng).expect("two others");
        self.alignment
            .set(Correspondence::new(left.clone(), right.clone(), to));
        Edit {
            side,
            op: EditOp::Realign {
                left,
                right,
                from: relation,
                to,
            },
            planted: true,
        }
    }

    fn relabel(&mut self, side: Side, c: usize, tag: &str) -> Edit {
        let t = &mut self.trees[side_index(side)];
        let new = format!("{} {tag}", t.labels[c]);
        let old = std::mem::replace(&mut t.labels[c], new.clone());
        Edit {
            side,
            op: EditOp::Relabel {
                concept: t.iri(c),
                old,
                new,
            },
            planted: false,
        }
    }

    fn structural(
        &mut self,
        side: Side,
        f: usize,
        tag: &str,
        rng: &mut ChaCha8Rng,
        out: &mut Vec<Edit>,
    ) {
        let i = side_index(side);
        let affect = rng.gen_bool(self.p_affect);
        let neighborhood = self.trees[i].closed_neighborhood(f);
        let is_root = self.trees[i].volatile_root == Some(f);

        let mut op = if is_root { 2 } else { rng.gen_range(0..3) };
        if op == 1 && self.trees[i].partner[f].is_some() && !affect {
            op = 0;
        }
        let mut move_target = None;
        if op == 0 {
            let t = &self.trees[i];
            let targets: Vec<usize> = (0..t.parent.len())
                .filter(|&q| {
                    t.alive[q] && t.volatile[q] && t.parent[f] != Some(q) && !t.in_subtree(q, f)
                })
                .collect();
            match targets.choose(rng) {
                Some(&q) => move_target = Some(q),
                None => op = 2,
            }
        }

        let mut alignment_edit = None;
        if affect {
            if op == 1 && self.trees[i].partner[f].is_some() {
                // Deleting an aligned concept always drops its correspondence.
            } else {
                let t = &self.trees[i];
                let aligned: Vec<usize> = neighborhood
                    .iter()
                    .copied()
                    .filter(|&c| t.partner[c].is_some())
                    .collect();
                let pick = if t.partner[f].is_some() {
                    Some(f)
                } else {
                    aligned.choose(rng).copied()
                };
                if let Some(c) = pick {
                    alignment_edit = Some(self.change_correspondence(side, c, rng));
                }
            }
        }

        let t = &mut self.trees[i];
        let edit_op = match op {
            0 => {
                let q = move_target.expect("chosen");
                let p = t.parent[f].expect("non-root");
                t.children[p].remove(&f);
                t.children[q].insert(f);
                t.parent[f] = Some(q);
                EditOp::Move {
                    concept: t.iri(f),
                    from: t.iri(p),
                    to: t.iri(q),
                }
            }
            1 => {
                let p = t.parent[f].expect("non-root");
                let kids: Vec<usize> = t.children[f].iter().copied().collect();
                for &k in &kids {
                    t.parent[k] = Some(p);
                    t.children[p].insert(k);
                }
                t.children[f].clear();
                t.children[p].remove(&f);
                t.alive[f] = false;
                let op = EditOp::Delete {
                    concept: t.iri(f),
                    parent: t.iri(p),
                    label: t.labels[f].clone(),
                    children: kids.iter().map(|&k| t.iri(k)).collect(),
                };
                op
            }
            _ => {
                let id = t.parent.len();
                let text = format!("{} concept {id} {tag}", side_name(side));
                let n = t.new_concept(Some(f), text.clone());
                t.volatile[n] = true;
                EditOp::Insert {
                    concept: t.iri(n),
                    parent: t.iri(f),
                    label: text,
                }
            }
        };
        if op == 1 && self.trees[i].partner[f].is_some() {
            alignment_edit = Some(self.unalign(side, f));
        }
        let planted = alignment_edit.is_some();
        out.push(Edit {
            side,
            op: edit_op,
            planted,
        });
        out.extend(alignment_edit);
    }

    fn unalign(&mut self, side: Side, c: usize) -> Edit {
        let (left, right) = self.pair_iris(side, c).expect("aligned");
        let i = side_index(side);
        let other = self.trees[i].partner[c].take().expect("aligned");
        self.trees[1 - i].partner[other] = None;
        let relation = self.alignment.remove_pair(&left, &right).expect("present");
        Edit {
            side,
            op: EditOp::Unalign {
                left,
                right,
                relation,
            },
            planted: true,
        }
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            o1: self.trees[0].triples(),
            o2: self.trees[1].triples(),
            alignment: self.alignment.clone(),
        }
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::O1 => "o1",
        Side::O2 => "o2",
    }
}

/// Per-resource impact flags for one epoch's edits, from tree adjacency at
/// the start of the epoch.
fn ground_truth(start: &[Tree; 2], edits: &[Edit]) -> BTreeMap<(Side, String), bool> {
    let index: [BTreeMap<String, usize>; 2] = [0, 1].map(|i| {
        (0..start[i].parent.len())
            .filter(|&c| start[i].alive[c])
            .map(|c| (start[i].iri(c), c))
            .collect()
    });
    let mut endpoints: [BTreeSet<usize>; 2] = Default::default();
    for e in edits {
        if let EditOp::Unalign { left, right, .. } | EditOp::Realign { left, right, .. } = &e.op {
            endpoints[0].extend(index[0].get(left));
            endpoints[1].extend(index[1].get(right));
        }
    }
    let mut created: BTreeMap<(Side, String), String> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for e in edits {
        let i = side_index(e.side);
        if let EditOp::Insert {
            concept, parent, ..
        } = &e.op
        {
            created.insert((e.side, concept.clone()), parent.clone());
        }
        for r in e.op.touched() {
            let key = (e.side, r.to_string());
            let flag = match index[i].get(r) {
                Some(&c) => start[i]
                    .closed_neighborhood(c)
                    .iter()
                    .any(|n| endpoints[i].contains(n)),
                None => created
                    .get(&key)
                    .and_then(|p| index[i].get(p))
                    .is_some_and(|p| endpoints[i].contains(p)),
            };
            out.insert(key, flag);
        }
    }
    out
}

pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario, SynthError> {
    config.validate()?;
    let mut trees = [Side::O1, Side::O2].map(|side| {
        let mut rng = seeds::rng(config.seed, &[1, side_index(side) as u64]);
        let mut t = random_tree(
            side_name(side),
            config.concepts_per_ontology,
            config.branching_factor,
            &mut rng,
        );
        mark_volatile(&mut t, config.volatile_fraction, &mut rng);
        t
    });

    let mut rng = seeds::rng(config.seed, &[2]);
    let mut alignment = Alignment::new();
    // Volatile concepts pair with volatile ones at equal depth below the
    // subtree root: both regions model the same evolving part of the domain.
    let level = |t: &Tree| {
        let d = depths(t);
        let base = t.volatile_root.map_or(0, |r| d[r]);
        (0..d.len())
            .map(|c| {
                if t.volatile[c] {
                    (true, d[c] - base)
                } else {
                    (false, d[c])
                }
            })
            .collect::<Vec<_>>()
    };
    let (k1, k2) = (level(&trees[0]), level(&trees[1]));
    let keys: BTreeSet<(bool, usize)> = k1.iter().chain(&k2).copied().collect();
    for key in keys {
        let mut l: Vec<usize> = (0..k1.len()).filter(|&c| k1[c] == key).collect();
        let mut r: Vec<usize> = (0..k2.len()).filter(|&c| k2[c] == key).collect();
        l.shuffle(&mut rng);
        r.shuffle(&mut rng);
        for (&a, &b) in l.iter().zip(&r) {
            if rng.gen_bool(config.aligned_fraction) {
                trees[0].partner[a] = Some(b);
                trees[1].partner[b] = Some(a);
                alignment.set(Correspondence::new(
                    trees[0].iri(a),
                    trees[1].iri(b),
                    Relation::Equivalent,
                ));
            }
        }
    }

    let volatile = [0, 1].map(|i| {
        (0..trees[i].parent.len())
            .filter(|&c| trees[i].volatile[c])
            .map(|c| trees[i].iri(c))
            .collect()
    });
    let mut g = Generator {
        trees,
        alignment,
        p_affect: config.p_affect,
    };
    let mut snapshots = vec![g.snapshot()];
    let mut edit_log = Vec::new();
    let mut truth = Vec::new();
    for epoch in 0..config.epochs - 1 {
        let start = g.trees.clone();
        let mut edits = Vec::new();
        for side in SIDES {
            let mut rng = seeds::rng(config.seed, &[3, epoch as u64, side_index(side) as u64]);
            for seq in 0..config.edits_per_epoch {
                let t = &g.trees[side_index(side)];
                let candidates: Vec<usize> = (1..t.parent.len()).filter(|&c| t.alive[c]).collect();
                let Some(&f) = candidates.choose(&mut rng) else {
                    break;
                };
                let tag = format!("e{}.{seq}", epoch + 1);
                if t.volatile[f] {
                    g.structural(side, f, &tag, &mut rng, &mut edits);
                } else {
                    edits.push(g.relabel(side, f, &tag));
                }
            }
        }
        truth.push(ground_truth(&start, &edits));
        edit_log.push(edits);
        snapshots.push(g.snapshot());
    }
    Ok(Scenario {
        config: config.clone(),
        snapshots,
        edit_log,
        ground_truth: truth,
        volatile,
    })
}

pub const EDIT_LOG_HEADER: [&str; 9] = [
    "epoch", "seq", "side", "op", "subject", "object", "old", "new", "planted",
];

fn edit_fields(op: &EditOp) -> [String; 4] {
    match op {
        EditOp::Relabel { concept, old, new } => {
            [concept.clone(), String::new(), old.clone(), new.clone()]
        }
        EditOp::Move { concept, from, to } => {
            [concept.clone(), String::new(), from.clone(), to.clone()]
        }
        EditOp::Delete {
            concept,
            parent,
            label,
            children,
        } => [
            concept.clone(),
            parent.clone(),
            label.clone(),
            children.join(" "),
        ],
        EditOp::Insert {
            concept,
            parent,
            label,
        } => [
            concept.clone(),
            parent.clone(),
            String::new(),
            label.clone(),
        ],
        EditOp::Unalign {
            left,
            right,
            relation,
        } => [
            left.clone(),
            right.clone(),
            relation.symbol().to_string(),
            String::new(),
        ],
        EditOp::Realign {
            left,
            right,
            from,
            to,
        } => [
            left.clone(),
            right.clone(),
            from.symbol().to_string(),
            to.symbol().to_string(),
        ],
    }
}

impl Scenario {
    /// Edit log as CSV; `epoch` is the snapshot the edit applies to.
    pub fn write_edit_log<W: Write>(&self, out: W) -> Result<(), SynthError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(EDIT_LOG_HEADER)?;
        for (epoch, edits) in self.edit_log.iter().enumerate() {
            for (seq, e) in edits.iter().enumerate() {
                let [subject, object, old, new] = edit_fields(&e.op);
                w.write_record([
                    epoch.to_string(),
                    seq.to_string(),
                    e.side.to_string(),
                    e.op.name().to_string(),
                    subject,
                    object,
                    old,
                    new,
                    e.planted.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_ground_truth<W: Write>(&self, out: W) -> Result<(), SynthError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["epoch", "side", "resource", "affects"])?;
        for (epoch, flags) in self.ground_truth.iter().enumerate() {
            for ((side, resource), flag) in flags {
                w.write_record([
                    epoch.to_string(),
                    side.to_string(),
                    resource.clone(),
                    flag.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `epoch{t}/{o1.nt,o2.nt,alignment.tsv}`, `editlog.csv` and
    /// `ground_truth.csv` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), SynthError> {
        for (t, s) in self.snapshots.iter().enumerate() {
            let d = dir.join(format!("epoch{t}"));
            std::fs::create_dir_all(&d)?;
            std::fs::write(d.join("o1.nt"), s.o1.to_ntriples())?;
            std::fs::write(d.join("o2.nt"), s.o2.to_ntriples())?;
            std::fs::write(d.join("alignment.tsv"), s.alignment.to_tsv())?;
        }
        self.write_edit_log(std::io::BufWriter::new(std::fs::File::create(
            dir.join("editlog.csv"),
        )?))?;
        self.write_ground_truth(std::io::BufWriter::new(std::fs::File::create(
            dir.join("ground_truth.csv"),
        )?))?;
        Ok(())
    }
}
