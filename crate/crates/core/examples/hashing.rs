//! Universal and k-wise independent hash families.
//!
//! Run with `cargo run --example hashing`.

use kmatch_stream::hash::{Gf2Field, KWiseHash, UniversalHash};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kmatch_stream::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    // ((a x + b) mod p) mod r with p the smallest prime >= 1000
    let h = UniversalHash::draw(1000, 16, &mut rng)?;
    println!("universal: p={} a={} b={} r={}", h.modulus(), h.multiplier(), h.offset(), h.range());
    let buckets: Vec<u64> = (0..10).map(|x| h.eval(x)).collect::<Result<_, _>>()?;
    println!("  first ten keys -> {buckets:?}");

    // 4-wise independent values: a random cubic over GF(2^12), low 5 bits kept
    let g = KWiseHash::draw(4, 12, 5, &mut rng)?;
    let values: Vec<u64> = (0..10).map(|x| g.eval(x)).collect();
    println!("4-wise: {values:?}");

    let field = Gf2Field::new(8).expect("widths 1..=64 are supported");
    println!("GF(2^8): 0x57 * 0x83 = {:#x}", field.mul(0x57, 0x83));
    Ok(())
}
