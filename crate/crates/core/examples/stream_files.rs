//! Stream text format: parsing, fixed-point weights, validation and replay.
//!
//! Run with `cargo run --example stream_files`.

use kmatch_stream::harness::optimum;
use kmatch_stream::stream::{check_well_formed, parse_stream, query_snapshots, render_stream, StreamModel};

const TEXT: &str = "\
# three edges, then one removed
H 6 2 2
I 1 0 1.5
I 2 3 2.25
I 4 5 0.75
Q
D 2 3 2.25
Q
";

fn main() -> kmatch_stream::Result<()> {
    let file = parse_stream(TEXT, StreamModel::Dynamic)?;
    print!("{}", render_stream(&file));
    println!("well formed: {:?}", check_well_formed(&file));
    for (i, live) in query_snapshots(&file).iter().enumerate() {
        let opt = optimum(&live.graph(), file.header.k).map(|m| m.weight());
        println!("query {}: {} live edges, optimum (x100) {:?}", i + 1, live.len(), opt);
    }

    if let Err(e) = parse_stream(TEXT, StreamModel::InsertOnly) {
        println!("as insert-only: {e}");
    }
    let bad = "H 6 2 2\nI 0 1 5\nI 0 1 5\nQ\n";
    println!("duplicate insert: {:?}", check_well_formed(&parse_stream(bad, StreamModel::Dynamic)?));
    Ok(())
}
