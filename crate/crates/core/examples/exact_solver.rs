//! Exact k-matching on small graphs, checked against exhaustive enumeration.
//!
//! Run with `cargo run --example exact_solver`.

use kmatch_stream::matching::{enumerate_oracle, max_nice_matching, solve_exact, Edge, SmallGraph};

fn main() -> kmatch_stream::Result<()> {
    let edges = [(0, 1, 5), (1, 2, 1), (2, 3, 5), (3, 4, 4), (4, 5, 2), (0, 5, 3)];
    let g = SmallGraph::new(edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect::<Result<_, _>>()?)?;

    for k in 1..=4 {
        let fast = solve_exact(&g, k);
        let slow = enumerate_oracle(&g, k);
        assert_eq!(fast, slow);
        match fast {
            Some(m) => {
                let pairs: Vec<_> = m.edges().iter().map(|e| e.endpoints()).collect();
                println!("k={k}: weight {} via {pairs:?}", m.weight());
            }
            None => println!("k={k}: none"),
        }
    }

    // parts {0,1,2} and {3,4,5}: a nice 2-matching needs four distinct parts
    let nice = max_nice_matching(&g, |v| u64::from(v / 3), 2);
    println!("nice 2-matching with two parts: {nice:?}");
    let nice = max_nice_matching(&g, u64::from, 2);
    println!("nice 2-matching with singleton parts: weight {:?}", nice.map(|m| m.weight()));
    Ok(())
}
