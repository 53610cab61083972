//! Generates a small evolution scenario, writes it to a directory and
//! summarizes the edits and planted labels of each epoch transition.
//!
//! Usage: `synthetic_scenario [out_dir]`

use std::collections::BTreeMap;
use std::path::PathBuf;

use alignment_drift::synth::{generate_scenario, ScenarioConfig};

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let scenario = generate_scenario(&ScenarioConfig {
        concepts_per_ontology: 300,
        edits_per_epoch: 60,
        seed: 9,
        ..ScenarioConfig::default()
    })
    .expect("valid config");

    for (t, snapshot) in scenario.snapshots.iter().enumerate() {
        println!(
            "epoch {t}: {} + {} triples, {} correspondences",
            snapshot.o1.len(),
            snapshot.o2.len(),
            snapshot.alignment.len()
        );
    }
    for (t, edits) in scenario.edit_log.iter().enumerate() {
        let mut ops: BTreeMap<&str, usize> = BTreeMap::new();
        for e in edits {
            *ops.entry(e.op.name()).or_default() += 1;
        }
        let truth = &scenario.ground_truth[t];
        let planted = truth.values().filter(|&&p| p).count();
        println!(
            "epoch {t} -> {}: {ops:?}; {planted}/{} touched concepts planted as affecting",
            t + 1,
            truth.len()
        );
    }

    if let Some(dir) = out {
        scenario.write_to(&dir).expect("writable directory");
        println!("written to {}", dir.display());
    }
}
