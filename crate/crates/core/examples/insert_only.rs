//! Insert-only streams: constant work per edge and a bounded edge store.
//!
//! Run with `cargo run --release --example insert_only`.

use kmatch_stream::harness::{gen_random_inserts, optimum};
use kmatch_stream::insert_only::{CopyState, InsertOnlyMatcher};
use kmatch_stream::matching::SmallGraph;
use kmatch_stream::stream::query_snapshots;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kmatch_stream::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (n, k) = (400, 3);
    let stream = gen_random_inserts(n, k, 50, 20_000, &mut rng)?;

    let mut m = InsertOnlyMatcher::new(n, k, 1.0 / 16.0, &mut rng)?;
    let q = m.copies()[0].q();
    println!("k={k}: q={q}, {} copies, at most {} ticks per update", m.copies().len(), m.max_update_ops());

    let mut worst_ops = 0;
    let mut most_edges = 0;
    for u in stream.updates() {
        m.update(u.edge())?;
        worst_ops = worst_ops.max(m.last_update_ops());
        most_edges = most_edges.max(m.copies().iter().map(CopyState::stored_edges).max().unwrap_or(0));
    }
    println!("20000 edges: max ticks per update {worst_ops}, max edges in one copy {most_edges} (cap {})", 5 * q);

    let answer = m.query().expect("dense random graph has a 3-matching");
    let live = &query_snapshots(&stream)[0];
    let opt = optimum(&SmallGraph::new(live.edges())?, k).expect("exists");
    println!("answer weight {}, optimum {}", answer.weight(), opt.weight());
    Ok(())
}
