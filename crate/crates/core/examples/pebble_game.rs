//! (2,k)-sparsity by the pebble game.
//!
//! Classifies a few small graphs for k = 2 and k = 3 and prints the
//! overloaded vertex set found when a graph is not sparse.
//!
//! ```bash
//! cargo run --example pebble_game
//! ```

use packrigid::sparsity::{pebble_sparse, ContactGraph};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k4_minus_edge = ContactGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])?;
    let two_k4 = ContactGraph::new(
        6,
        [
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (3, 4),
            (4, 5),
            (2, 5),
            (3, 5),
        ],
    )?;
    let graphs = [
        ("4-cycle", ContactGraph::cycle(4)),
        ("K4 minus an edge", k4_minus_edge),
        ("K4", ContactGraph::complete(4)),
        ("two K4 sharing an edge", two_k4),
        ("K5", ContactGraph::complete(5)),
    ];
    for (name, graph) in &graphs {
        for k in [2, 3] {
            let cert = pebble_sparse(graph, k);
            let witness = match &cert.witness {
                Some(w) => format!(", witness {w:?} spans {} edges", cert.witness_edges),
                None => String::new(),
            };
            println!("{name:<24} (2,{k}): {:?}{witness}", cert.verdict);
        }
    }
    Ok(())
}
