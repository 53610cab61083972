//! Generates seeded random walks over a toy graph and writes the corpus in
//! its on-disk format.

use alignment_drift::rdf::{build_graph, parse_ntriples};
use alignment_drift::walks::{generate_walks, write_corpus, WalkConfig};

fn main() {
    let triples = parse_ntriples(
        "<http://ex.org/Heart> <http://ex.org/sub> <http://ex.org/Organ> .\n\
         <http://ex.org/Organ> <http://ex.org/sub> <http://ex.org/Entity> .\n\
         <http://ex.org/Heart> <http://ex.org/label> \"heart muscle\"@en .\n\
         <http://ex.org/Entity> <http://ex.org/seeAlso> <http://ex.org/Heart> .\n",
    )
    .unwrap();
    let graph = build_graph([&triples]);
    let config = WalkConfig {
        depth: 4,
        walks_per_entity: 3,
        include_literals: true,
        seed: 7,
    };
    let walks = generate_walks(&graph, &graph.entities(), &config).expect("valid config");
    println!(
        "{} walks from {} entities",
        walks.len(),
        graph.entities().len()
    );
    write_corpus(&walks, std::io::stdout().lock()).expect("stdout");
}
