//! Random walks over the merged graph, used as the embedding corpus.
//!
//! Walks follow edge direction. Each step picks one outgoing edge uniformly
//! and emits the predicate token followed by the object token, so a walk of
//! `k` steps has `2k + 1` tokens.

use std::io::{BufRead, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::{Graph, NodeId};
use crate::seeds;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("start node {0} is not in the graph")]
    UnknownNode(u32),
    #[error("start node {0} is a literal")]
    LiteralStart(u32),
    #[error("invalid walk config: {0}")]
    InvalidConfig(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Maximum number of edges traversed per walk.
    pub depth: usize,
    pub walks_per_entity: usize,
    pub include_literals: bool,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            depth: 8,
            walks_per_entity: 100,
            include_literals: true,
            seed: 0,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), WalkError> {
        if self.depth == 0 {
            return Err(WalkError::InvalidConfig("depth must be at least 1".into()));
        }
        if self.walks_per_entity == 0 {
            return Err(WalkError::InvalidConfig(
                "walks_per_entity must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub tokens: Vec<String>,
}

impl Walk {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Walks from every start entity, ordered by entity then replica index.
///
/// Replica `r` of entity `e` draws from a generator seeded by
/// `(seed, hash(e), r)`, so the corpus does not depend on worker count.
pub fn generate_walks(
    graph: &Graph,
    starts: &[NodeId],
    config: &WalkConfig,
) -> Result<Vec<Walk>, WalkError> {
    config.validate()?;
    for &s in starts {
        if !graph.contains(s) {
            return Err(WalkError::UnknownNode(s.0));
        }
        if graph.term(s).is_literal() {
            return Err(WalkError::LiteralStart(s.0));
        }
    }
    let mut starts = starts.to_vec();
    starts.sort_unstable();
    starts.dedup();

    let tokens: Vec<String> = graph.nodes().map(|n| graph.term(n).token()).collect();
    let per_entity: Vec<Vec<Walk>> = starts
        .par_iter()
        .map(|&s| {
            let entity_hash = seeds::hash_str(&tokens[s.index()]);
            (0..config.walks_per_entity)
                .map(|r| {
                    let mut rng = seeds::rng(config.seed, &[entity_hash, r as u64]);
                    walk_from(graph, s, config, &tokens, &mut rng)
                })
                .collect()
        })
        .collect();
    Ok(per_entity.into_iter().flatten().collect())
}

fn walk_from<R: Rng>(
    graph: &Graph,
    start: NodeId,
    config: &WalkConfig,
    tokens: &[String],
    rng: &mut R,
) -> Walk {
    let mut out = vec![tokens[start.index()].clone()];
    let mut current = start;
    let mut choices: Vec<&crate::rdf::Edge> = Vec::new();
    for _ in 0..config.depth {
        choices.clear();
        choices.extend(
            graph
                .outgoing(current)
                .filter(|e| config.include_literals || !graph.term(e.dst).is_literal()),
        );
        if choices.is_empty() {
            break;
        }
        let edge = choices[rng.gen_range(0..choices.len())];
        out.push(tokens[edge.predicate.index()].clone());
        out.push(tokens[edge.dst.index()].clone());
        current = edge.dst;
    }
    Walk { tokens: out }
}

/// Percent-encodes `%` and whitespace so tokens survive space-separated files.
pub fn encode_token(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    for c in token.chars() {
        match c {
            '%' => out.push_str("%25"),
            ' ' => out.push_str("%20"),
            '\t' => out.push_str("%09"),
            '\n' => out.push_str("%0A"),
            '\r' => out.push_str("%0D"),
            c => out.push(c),
        }
    }
    out
}

pub fn decode_token(token: &str) -> String {
    let hex = |b: u8| (b as char).to_digit(16).map(|d| d as u8);
    let bytes = token.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            if let (Some(hi), Some(lo)) = (hex(bytes[i + 1]), hex(bytes[i + 2])) {
                out.push(hi * 16 + lo);
                i += 3;
                continue;
            }
        }
        out.push(bytes[i]);
        i += 1;
    }
    String::from_utf8_lossy(&out).into_owned()
}

pub fn write_corpus<W: Write>(walks: &[Walk], mut out: W) -> std::io::Result<()> {
    for w in walks {
        let line: Vec<String> = w.tokens.iter().map(|t| encode_token(t)).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    out.flush()
}

pub fn read_corpus<R: BufRead>(input: R) -> std::io::Result<Vec<Walk>> {
    let mut walks = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        walks.push(Walk {
            tokens: line.split(' ').map(decode_token).collect(),
        });
    }
    Ok(walks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{build_graph, Term, Triple, TripleSet};

    fn graph(triples: &[(&str, &str, &str)]) -> Graph {
        let set: TripleSet = triples
            .iter()
            .map(|(s, p, o)| Triple::iris(s, p, o))
            .collect();
        build_graph([&set])
    }

    fn cfg(depth: usize, n: usize) -> WalkConfig {
        WalkConfig {
            depth,
            walks_per_entity: n,
            include_literals: true,
            seed: 11,
        }
    }

    #[test]
    fn sink_walks_are_single_token() {
        let g = graph(&[("a", "p", "b")]);
        let b = g.node_by_iri("b").unwrap();
        let walks = generate_walks(&g, &[b], &cfg(8, 4)).unwrap();
        assert_eq!(walks.len(), 4);
        assert!(walks.iter().all(|w| w.tokens == ["b"]));
    }

    #[test]
    fn chain_is_deterministic() {
        let g = graph(&[("a", "p", "b"), ("b", "q", "c")]);
        let a = g.node_by_iri("a").unwrap();
        let walks = generate_walks(&g, &[a], &cfg(8, 5)).unwrap();
        assert!(walks.iter().all(|w| w.tokens == ["a", "p", "b", "q", "c"]));
        let short = generate_walks(&g, &[a], &cfg(1, 1)).unwrap();
        assert_eq!(short[0].tokens, ["a", "p", "b"]);
    }

    #[test]
    fn same_seed_same_corpus() {
        let g = graph(&[
            ("a", "p", "b"),
            ("a", "p", "c"),
            ("b", "q", "a"),
            ("c", "q", "a"),
        ]);
        let starts = g.entities();
        let w1 = generate_walks(&g, &starts, &cfg(8, 20)).unwrap();
        let w2 = generate_walks(&g, &starts, &cfg(8, 20)).unwrap();
        let (mut b1, mut b2) = (Vec::new(), Vec::new());
        write_corpus(&w1, &mut b1).unwrap();
        write_corpus(&w2, &mut b2).unwrap();
        assert_eq!(b1, b2);
        let mut other = cfg(8, 20);
        other.seed = 12;
        assert_ne!(generate_walks(&g, &starts, &other).unwrap(), w1);
    }

    #[test]
    fn literals_end_walks_or_are_skipped() {
        let set: TripleSet = [
            Triple::new(
                Term::iri("a"),
                Term::iri("label"),
                Term::literal("has space"),
            ),
            Triple::iris("a", "p", "b"),
        ]
        .into_iter()
        .collect();
        let g = build_graph([&set]);
        let a = g.node_by_iri("a").unwrap();
        let walks = generate_walks(&g, &[a], &cfg(8, 200)).unwrap();
        assert!(walks
            .iter()
            .any(|w| w.tokens.last().unwrap() == "\"has space\""));
        assert!(walks.iter().all(|w| w.len() == 3));

        let mut no_lit = cfg(8, 200);
        no_lit.include_literals = false;
        let walks = generate_walks(&g, &[a], &no_lit).unwrap();
        assert!(walks.iter().all(|w| w.tokens == ["a", "p", "b"]));
    }

    #[test]
    fn errors() {
        let set: TripleSet = [Triple::new(
            Term::iri("a"),
            Term::iri("p"),
            Term::literal("x"),
        )]
        .into_iter()
        .collect();
        let g = build_graph([&set]);
        let lit = g.node(&Term::literal("x")).unwrap();
        assert!(matches!(
            generate_walks(&g, &[lit], &cfg(8, 1)),
            Err(WalkError::LiteralStart(_))
        ));
        assert!(matches!(
            generate_walks(&g, &[NodeId(50)], &cfg(8, 1)),
            Err(WalkError::UnknownNode(50))
        ));
        assert!(matches!(
            generate_walks(&g, &[], &cfg(0, 1)),
            Err(WalkError::InvalidConfig(_))
        ));
    }

    #[test]
    fn corpus_round_trip_with_spaces() {
        let walks = vec![
            Walk {
                tokens: vec!["a".into(), "p".into(), "\"x y%z\"@en".into()],
            },
            Walk {
                tokens: vec!["http://e/a%20b".into()],
            },
        ];
        let mut buf = Vec::new();
        write_corpus(&walks, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), "a p \"x%20y%25z\"@en");
        assert_eq!(read_corpus(buf.as_slice()).unwrap(), walks);
    }
}
