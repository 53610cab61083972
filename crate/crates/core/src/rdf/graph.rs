use std::collections::{BTreeSet, HashMap};

use super::{RdfError, Term, TripleSet};

/// Dense node index into a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub src: NodeId,
    pub predicate: NodeId,
    pub dst: NodeId,
}

/// Interned, immutable labeled multigraph over the union of some triple sets.
///
/// Node ids are assigned in sorted term order, so the same triples always
/// produce the same graph regardless of how they were grouped or ordered.
/// Predicates are interned as nodes but only ever act as edge labels.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    terms: Vec<Term>,
    index: HashMap<Term, NodeId>,
    edges: Vec<Edge>,
    /// Edge indices leaving each node, in edge order.
    outgoing: Vec<Vec<u32>>,
    /// Sorted, deduplicated neighbors ignoring direction and predicate.
    neighbors: Vec<Vec<NodeId>>,
}

/// Builds the merged graph of several triple sets (set union).
pub fn build_graph<'a>(sets: impl IntoIterator<Item = &'a TripleSet>) -> Graph {
    let mut union = BTreeSet::new();
    for set in sets {
        union.extend(set.iter());
    }

    let mut terms: BTreeSet<&Term> = BTreeSet::new();
    for t in &union {
        terms.insert(&t.subject);
        terms.insert(&t.predicate);
        terms.insert(&t.object);
    }
    let terms: Vec<Term> = terms.into_iter().cloned().collect();
    let index: HashMap<Term, NodeId> = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), NodeId(i as u32)))
        .collect();

    let n = terms.len();
    let mut edges = Vec::with_capacity(union.len());
    let mut outgoing = vec![Vec::new(); n];
    let mut neighbors = vec![Vec::new(); n];
    for t in &union {
        let e = Edge {
            src: index[&t.subject],
            predicate: index[&t.predicate],
            dst: index[&t.object],
        };
        outgoing[e.src.index()].push(edges.len() as u32);
        if e.src != e.dst {
            neighbors[e.src.index()].push(e.dst);
            neighbors[e.dst.index()].push(e.src);
        }
        edges.push(e);
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }

    Graph {
        terms,
        index,
        edges,
        outgoing,
        neighbors,
    }
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.terms.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, term: &Term) -> Option<NodeId> {
        self.index.get(term).copied()
    }

    pub fn node_by_iri(&self, iri: &str) -> Option<NodeId> {
        self.node(&Term::iri(iri))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.index() < self.terms.len()
    }

    pub fn term(&self, id: NodeId) -> &Term {
        &self.terms[id.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.terms.len() as u32).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outgoing(&self, id: NodeId) -> impl ExactSizeIterator<Item = &Edge> + '_ {
        self.outgoing[id.index()]
            .iter()
            .map(move |&e| &self.edges[e as usize])
    }

    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.neighbors[id.index()]
    }

    /// IRI nodes that occur as a subject or object of some edge.
    pub fn entities(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.terms.len()];
        for e in &self.edges {
            seen[e.src.index()] = true;
            seen[e.dst.index()] = true;
        }
        self.nodes()
            .filter(|&n| seen[n.index()] && self.term(n).is_iri())
            .collect()
    }

    /// Undirected hop counts from `source` to every node within `max_depth`.
    pub fn bfs_within(
        &self,
        source: NodeId,
        max_depth: usize,
    ) -> Result<HashMap<NodeId, usize>, RdfError> {
        if !self.contains(source) {
            return Err(RdfError::UnknownNode(source.0));
        }
        Ok(self.bfs_from(&[(source, 0)], max_depth))
    }

    /// Multi-source BFS where each source starts at its own initial distance.
    ///
    /// Unknown sources are ignored. Used to anchor resources that are absent
    /// from the graph through their neighbors at +1.
    pub fn bfs_from(
        &self,
        sources: &[(NodeId, usize)],
        max_depth: usize,
    ) -> HashMap<NodeId, usize> {
        let mut dist: HashMap<NodeId, usize> = HashMap::new();
        // Bucket queue: initial distances are small and non-uniform.
        let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_depth + 1];
        for &(s, d) in sources {
            if !self.contains(s) || d > max_depth {
                continue;
            }
            if dist.get(&s).is_none_or(|&old| d < old) {
                dist.insert(s, d);
                buckets[d].push(s);
            }
        }
        for depth in 0..=max_depth {
            let frontier = std::mem::take(&mut buckets[depth]);
            for u in frontier {
                if dist[&u] != depth {
                    continue;
                }
                if depth == max_depth {
                    continue;
                }
                for &v in self.neighbors(u) {
                    let nd = depth + 1;
                    if dist.get(&v).is_none_or(|&old| nd < old) {
                        dist.insert(v, nd);
                        buckets[nd].push(v);
                    }
                }
            }
        }
        dist
    }
}
