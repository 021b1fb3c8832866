//! Rounded weights: one sampler family per power of 1 + eps instead of per
//! distinct weight.
//!
//! Run with `cargo run --release --example approx_matching`.

use kmatch_stream::dynamic::{class_weight, weight_class, DynamicMatcher, WeightMode};
use kmatch_stream::stream::{parse_stream, StreamModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STREAM: &str = "\
H 20 2 2
I 0 1 1.00
I 2 3 1.05
I 4 5 2.50
I 6 7 2.60
I 8 9 7.25
D 8 9 7.25
Q
";

fn main() -> kmatch_stream::Result<()> {
    let eps = 0.1;
    for w in [1.0, 1.05, 2.5, 2.6, 7.25] {
        let i = weight_class(w, eps)?;
        println!("w={w:<5} class {i:>3}, representative {:.4}", class_weight(i, eps));
    }

    let file = parse_stream(STREAM, StreamModel::Dynamic)?;
    let mode = WeightMode::Rounded { epsilon: eps, scale: file.header.scale() };
    let mut m = DynamicMatcher::new(file.header.n, file.header.k, mode, &mut ChaCha8Rng::seed_from_u64(5))?;
    for u in file.updates() {
        m.update(u)?;
    }
    println!("distinct classes in the bank: {:?}", m.classes_seen());
    if let Some(a) = m.query() {
        println!("answer {:?}, rounded weight {:.4}", a.endpoints(), a.reported_weight());
    }
    Ok(())
}
