//! The vertex-to-index relation used by the dynamic matcher, and a check that
//! it separates a random subset.
//!
//! Run with `cargo run --release --example partition_scheme`.

use kmatch_stream::partition::{check_interval_properties, separation_witness, HashScheme, SchemeParams};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kmatch_stream::Result<()> {
    let p = SchemeParams::new(1024, 8)?;
    println!(
        "|U|=1024 k=8: u={} d={} d1={} d2={} d3={} kappa={} index range={}",
        p.u,
        p.d,
        p.d1,
        p.d2,
        p.d3,
        p.kappa,
        p.index_range()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scheme = HashScheme::build(1024, 8, &mut rng)?;
    println!("G(5) = {:?}", scheme.relation(5)?);

    let subset: Vec<u64> = sample(&mut rng, 1024, 8).into_iter().map(|x| x as u64).collect();
    let report = separation_witness(&subset, &scheme);
    println!("subset {subset:?}");
    println!("  witness indices {:?}, verified {:?}", report.witness, report.verified);

    let small = HashScheme::build(256, 3, &mut rng)?;
    println!("interval properties on |U|=256, k=3: {:?}", check_interval_properties(&small));
    Ok(())
}
