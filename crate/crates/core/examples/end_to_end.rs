//! Generates a synthetic scenario in memory and runs the whole pipeline on it.
//!
//! Usage: `end_to_end [seed] [dims] [walks_per_entity]`

use std::time::Instant;

use alignment_drift::classify::{write_report_table, ClassifierSpec};
use alignment_drift::embedding::TrainConfig;
use alignment_drift::pipeline::{run, EpochInput, RunSettings};
use alignment_drift::synth::{generate_scenario, ScenarioConfig};
use alignment_drift::walks::WalkConfig;

fn main() {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let seed = args.first().copied().unwrap_or(1);
    let dims = args.get(1).copied().unwrap_or(100) as usize;
    let walks = args.get(2).copied().unwrap_or(20) as usize;

    let start = Instant::now();
    let scenario = generate_scenario(&ScenarioConfig {
        seed,
        ..ScenarioConfig::default()
    })
    .expect("valid scenario config");
    let epochs: Vec<EpochInput> = scenario.snapshots.iter().map(EpochInput::from).collect();
    println!(
        "scenario generated in {:.1}s",
        start.elapsed().as_secs_f64()
    );

    let settings = RunSettings {
        walk: WalkConfig {
            walks_per_entity: walks,
            seed,
            ..WalkConfig::default()
        },
        train: TrainConfig {
            dimensions: dims,
            seed,
            ..TrainConfig::default()
        },
        radius: 2,
        classifiers: ClassifierSpec::roster(seed),
    };
    let out = run(&epochs, &settings).expect("pipeline run");
    for (name, t) in [("train", &out.train), ("test", &out.test)] {
        println!(
            "{name}: {} changes, {} near alignment statements, {:.1}% affect the alignment, {} featurized",
            t.changes,
            t.outcome.labeled.len(),
            100.0 * t.outcome.positives() as f64 / t.outcome.labeled.len().max(1) as f64,
            t.dataset.len(),
        );
    }
    println!(
        "graph: {} nodes, {} walks, majority baseline on test {:.4}",
        out.graph_nodes,
        out.walks.len(),
        out.test.dataset.majority_baseline()
    );
    write_report_table(&out.report, std::io::stdout()).expect("stdout");
    println!("total {:.1}s", start.elapsed().as_secs_f64());
}
