//! Diffs two ontology versions and labels each change by whether a changed
//! alignment statement lies within two hops of it.

use alignment_drift::alignment::{diff_alignments, parse_alignment, reify, statement_index};
use alignment_drift::changes::{
    diff_ontologies, label_changes, Side, StatementNodes, DEFAULT_RADIUS,
};
use alignment_drift::rdf::{build_graph, parse_ntriples};

const BASE: &str = "urn:example:";

fn main() {
    let o1_old = parse_ntriples(
        "<http://a.org/Heart> <http://a.org/sub> <http://a.org/Organ> .\n\
         <http://a.org/Lung> <http://a.org/sub> <http://a.org/Organ> .\n\
         <http://a.org/Skin> <http://a.org/sub> <http://a.org/Tissue> .\n\
         <http://a.org/Tissue> <http://a.org/sub> <http://a.org/Thing> .\n",
    )
    .unwrap();
    let o1_new = parse_ntriples(
        "<http://a.org/Heart> <http://a.org/sub> <http://a.org/Muscle> .\n\
         <http://a.org/Lung> <http://a.org/sub> <http://a.org/Organ> .\n\
         <http://a.org/Skin> <http://a.org/sub> <http://a.org/Thing> .\n\
         <http://a.org/Tissue> <http://a.org/sub> <http://a.org/Thing> .\n",
    )
    .unwrap();
    let o2 =
        parse_ntriples("<http://b.org/Heart> <http://b.org/sub> <http://b.org/Organ> .\n").unwrap();
    let old_alignment = parse_alignment("http://a.org/Heart\thttp://b.org/Heart\t=\n").unwrap();
    let new_alignment = parse_alignment("http://a.org/Heart\thttp://b.org/Heart\t<\n").unwrap();

    let changes = diff_ontologies(&o1_old, &o1_new, Side::O1);
    let statements_triples = reify(&old_alignment, BASE);
    let graph = build_graph([&o1_old, &o2, &statements_triples]);
    let statements =
        StatementNodes::resolve(&graph, &statement_index(&old_alignment, BASE)).unwrap();
    let delta = diff_alignments(&old_alignment, &new_alignment);
    let outcome = label_changes(&changes, &graph, &delta, &statements, DEFAULT_RADIUS).unwrap();

    for l in &outcome.labeled {
        println!(
            "{:<24} {:<9} distance {}  {}",
            l.change.resource,
            l.change.kind.to_string(),
            l.nearest_statement_distance,
            l.label
        );
    }
    println!(
        "{} changes: {} labeled, {} without anchor, {} out of radius",
        changes.len(),
        outcome.labeled.len(),
        outcome.unanchored,
        outcome.out_of_radius
    );
}
