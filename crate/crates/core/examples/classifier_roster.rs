//! Fits every classifier kind on two toy problems and prints held-out accuracy:
//! Gaussian blobs (linearly separable) and XOR (not linearly separable).

use alignment_drift::changes::ImpactLabel;
use alignment_drift::classify::{evaluate, fit, ClassifierSpec, Dataset, Row};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn row(features: Vec<f64>, positive: bool) -> Row {
    Row {
        features,
        label: ImpactLabel::from_positive(positive),
        resource: String::new(),
    }
}

fn blobs(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let noise = Normal::new(0.0, 1.0).unwrap();
    let rows = (0..n)
        .map(|i| {
            let positive = i % 2 == 0;
            let center = if positive { 2.0 } else { -2.0 };
            row(
                (0..d).map(|_| center + noise.sample(rng)).collect(),
                positive,
            )
        })
        .collect();
    Dataset { rows }
}

/// Each sample appears with its three reflections, so no line does better than chance.
fn xor(orbits: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let mut rows = Vec::new();
    for _ in 0..orbits {
        let x: f64 = rng.gen_range(0.1..1.0);
        let y: f64 = rng.gen_range(0.1..1.0);
        rows.push(row(vec![x, y], true));
        rows.push(row(vec![-x, -y], true));
        rows.push(row(vec![-x, y], false));
        rows.push(row(vec![x, -y], false));
    }
    Dataset { rows }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let problems = [
        ("blobs", blobs(100, 10, &mut rng), blobs(100, 10, &mut rng)),
        ("xor", xor(50, &mut rng), xor(50, &mut rng)),
    ];
    for (name, train, test) in &problems {
        println!(
            "{name}: {} train rows, {} test rows",
            train.len(),
            test.len()
        );
        for spec in ClassifierSpec::roster(7) {
            let start = std::time::Instant::now();
            let model = fit(&spec, train).expect("fit");
            let m = evaluate(&model, test).expect("evaluate");
            println!(
                "  {:<16} accuracy {:.3}  ({:.2}s)",
                spec.name(),
                m.accuracy,
                start.elapsed().as_secs_f64()
            );
        }
    }
}
