//! Trains skip-gram embeddings on walks over a barbell graph (two cliques
//! joined by one edge) and compares cosine similarity within and across
//! the cliques.

use alignment_drift::embedding::{build_vocab, cosine, train_skipgram, TokenVectors, TrainConfig};
use alignment_drift::rdf::{build_graph, Triple, TripleSet};
use alignment_drift::walks::{generate_walks, WalkConfig};

fn node(side: char, i: usize) -> String {
    format!("http://barbell.example/{side}{i}")
}

fn main() {
    let size = 6;
    let link = "http://barbell.example/link";
    let mut triples = TripleSet::new();
    for side in ['a', 'b'] {
        for i in 0..size {
            for j in (0..size).filter(|&j| j != i) {
                triples.insert(Triple::iris(&node(side, i), link, &node(side, j)));
            }
        }
    }
    triples.insert(Triple::iris(&node('a', 0), link, &node('b', 0)));
    triples.insert(Triple::iris(&node('b', 0), link, &node('a', 0)));

    let graph = build_graph([&triples]);
    let walks = generate_walks(
        &graph,
        &graph.entities(),
        &WalkConfig {
            walks_per_entity: 40,
            seed: 1,
            ..WalkConfig::default()
        },
    )
    .unwrap();
    let vocab = build_vocab(&walks, 1).unwrap();
    let model = train_skipgram(
        &walks,
        vocab,
        &TrainConfig {
            dimensions: 24,
            seed: 1,
            ..TrainConfig::default()
        },
    )
    .unwrap();
    let kv = model.keyed_vectors();

    let sim = |a: &str, b: &str| cosine(kv.vector(a).unwrap(), kv.vector(b).unwrap());
    println!("a1 ~ a2  {:.3}", sim(&node('a', 1), &node('a', 2)));
    println!("b1 ~ b2  {:.3}", sim(&node('b', 1), &node('b', 2)));
    println!("a1 ~ b1  {:.3}", sim(&node('a', 1), &node('b', 1)));
    println!(
        "a0 ~ b0  {:.3}  (bridge)",
        sim(&node('a', 0), &node('b', 0))
    );
}
