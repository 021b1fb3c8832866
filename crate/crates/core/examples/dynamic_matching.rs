//! Exact maximum-weight k-matching over a stream with deletions.
//!
//! Run with `cargo run --release --example dynamic_matching`.

use kmatch_stream::dynamic::{DynamicMatcher, EdgeUpdate, WeightMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kmatch_stream::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut m = DynamicMatcher::new(30, 2, WeightMode::Exact, &mut rng)?;
    let p = m.scheme().params();
    println!("n=30 k=2: {} samplers per update, sampler delta {:.2e}", p.d2 * p.d2, m.delta());

    let stream = [
        EdgeUpdate::insert(0, 1, 4)?,
        EdgeUpdate::insert(2, 3, 6)?,
        EdgeUpdate::insert(1, 2, 9)?,
        EdgeUpdate::insert(4, 5, 3)?,
    ];
    for u in &stream {
        m.update(u)?;
    }
    show(&m, "after four insertions");

    m.update(&EdgeUpdate::delete(1, 2, 9)?)?;
    show(&m, "after deleting 1-2");

    m.update(&EdgeUpdate::delete(2, 3, 6)?)?;
    m.update(&EdgeUpdate::delete(4, 5, 3)?)?;
    show(&m, "with a single edge left");

    println!("{} samplers created, {} words stored", m.bank_len(), m.stored_words());
    Ok(())
}

fn show(m: &DynamicMatcher, label: &str) {
    let (answer, stats) = m.query_with_stats();
    match answer {
        Some(a) => println!("{label}: {:?} weight {}", a.endpoints(), a.reported_weight()),
        None => println!("{label}: no 2-matching"),
    }
    println!("  samplers: {} sampled, {} empty, {} failed", stats.sampled, stats.empty, stats.failed);
}
