//! Parses a small N-Triples document, builds the merged graph and prints
//! undirected hop counts from one concept.

use alignment_drift::rdf::{build_graph, parse_ntriples};

const DOC: &str = r#"
<http://ex.org/Heart> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/Organ> .
<http://ex.org/Lung> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/Organ> .
<http://ex.org/Organ> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <http://ex.org/AnatomicalEntity> .
<http://ex.org/Heart> <http://www.w3.org/2000/01/rdf-schema#label> "heart"@en .
<http://ex.org/Aorta> <http://ex.org/partOf> _:vessels .
_:vessels <http://ex.org/partOf> <http://ex.org/Heart> .
"#;

fn main() {
    let triples = parse_ntriples(DOC).expect("valid N-Triples");
    println!(
        "{} triples, canonical form:\n{}",
        triples.len(),
        triples.to_ntriples()
    );

    let graph = build_graph([&triples]);
    println!("{} nodes, {} edges", graph.node_count(), graph.edge_count());

    let source = graph
        .node_by_iri("http://ex.org/Lung")
        .expect("Lung is a node");
    let mut dist: Vec<_> = graph
        .bfs_within(source, 10)
        .expect("known node")
        .into_iter()
        .collect();
    dist.sort_by_key(|&(n, d)| (d, n));
    for (node, d) in dist {
        println!("{d}  {}", graph.term(node));
    }
}
