//! Parses two alignment versions, diffs them and shows the reified
//! statement triples of the old version.

use alignment_drift::alignment::{diff_alignments, parse_alignment, reify, DEFAULT_BASE_IRI};

const OLD: &str = "\
# left\tright\trelation
http://a.org/Heart\thttp://b.org/Heart\t=
http://a.org/Lung\thttp://b.org/Lung\t=
http://a.org/Organ\thttp://b.org/BodyPart\t<
";

const NEW: &str = "\
http://a.org/Heart\thttp://b.org/Heart\t=
http://a.org/Organ\thttp://b.org/BodyPart\t=
http://a.org/Aorta\thttp://b.org/Aorta\t=
";

fn main() {
    let old = parse_alignment(OLD).expect("valid alignment");
    let new = parse_alignment(NEW).expect("valid alignment");

    print!("{}", reify(&old, DEFAULT_BASE_IRI).to_ntriples());

    let delta = diff_alignments(&old, &new);
    for c in &delta.removed {
        println!("- {} {} {}", c.left, c.relation, c.right);
    }
    for c in &delta.added {
        println!("+ {} {} {}", c.left, c.relation, c.right);
    }
    println!("changed pairs:");
    for (l, r) in &delta.changed_pairs {
        println!("  ({l}, {r})");
    }
}
