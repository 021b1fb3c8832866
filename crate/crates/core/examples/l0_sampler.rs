//! Sampling a nonzero coordinate of a vector under insertions and deletions.
//!
//! Run with `cargo run --release --example l0_sampler`.

use std::collections::BTreeMap;

use kmatch_stream::sampler::{L0Sampler, SampleOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kmatch_stream::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let domain = 1 << 20;
    let delta = 0.01;

    let mut s = L0Sampler::new(domain, delta, &mut rng)?;
    println!("{} repetitions x {} levels, {} counters at most", s.repetitions(), s.levels(), s.counter_capacity());
    s.update(42, 1)?;
    s.update(77, 1)?;
    s.update(42, -1)?;
    println!("after +42 +77 -42: {:?}", s.query());
    s.update(77, -1)?;
    println!("after -77: {:?}", s.query());

    // fresh samplers over the support {3, 9} pick each about half the time
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    for _ in 0..2000 {
        let mut s = L0Sampler::new(domain, delta, &mut rng)?;
        s.update(3, 1)?;
        s.update(9, 1)?;
        let key = match s.query() {
            SampleOutcome::Sampled(id) => id.to_string(),
            other => format!("{other:?}"),
        };
        *counts.entry(key).or_default() += 1;
    }
    println!("2000 samplers over {{3, 9}}: {counts:?}");
    Ok(())
}
