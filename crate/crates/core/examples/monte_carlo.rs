//! Seeded trials comparing each algorithm with the exact optimum.
//!
//! Run with `cargo run --release --example monte_carlo`.

use kmatch_stream::harness::{run_trials, Algorithm, PlantedConfig, TrialConfig, Workload};
use kmatch_stream::stream::StreamModel;

fn main() -> kmatch_stream::Result<()> {
    let runs = [
        (Algorithm::Dynamic, StreamModel::Dynamic, 0.4),
        (Algorithm::DynamicApprox { epsilon: 0.1 }, StreamModel::Dynamic, 0.4),
        (Algorithm::InsertOnly { delta: 0.5 }, StreamModel::InsertOnly, 0.0),
        (Algorithm::InsertOnly { delta: 1.0 / 16.0 }, StreamModel::InsertOnly, 0.0),
    ];
    for (algorithm, model, del_rate) in runs {
        let cfg = TrialConfig {
            algorithm,
            workload: Workload::Planted(PlantedConfig::new(30, 2, 5, 200, del_rate, model)),
            trials: 50,
            seed: 2024,
        };
        let r = run_trials(&cfg)?;
        println!(
            "{algorithm:?}: {}/{} optimal, {} one-sided violations, max {} ops per update, peak {} words",
            r.successes, r.with_matching, r.one_sided_violations, r.max_update_ops, r.peak_stored_words
        );
    }

    let cfg = TrialConfig {
        algorithm: Algorithm::Dynamic,
        workload: Workload::NoMatching { n: 30, k: 2, weights: 5, m: 200, del_rate: 0.4 },
        trials: 20,
        seed: 2024,
    };
    let r = run_trials(&cfg)?;
    println!("streams without a 2-matching: {} answers returned, {} violations", r.answered, r.one_sided_violations);
    Ok(())
}
