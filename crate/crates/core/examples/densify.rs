//! Making a packing independent by reshaping the body.
//!
//! Takes K4 minus an edge and a planar (2,2)-tight graph on seven
//! vertices, and reshapes an exp-family body near its contact directions
//! until the packing's rigidity matrix has full row rank.
//!
//! ```bash
//! cargo run --release --example densify
//! ```

use packrigid::body::{ConvexBody, Vec2};
use packrigid::harness::{densify_independent, DensifyConfig};
use packrigid::sparsity::ContactGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dirs = vec![
        Vec2::new(1.0, 0.0),
        Vec2::new(0.3, 1.0),
        Vec2::new(-0.8, 0.6),
    ];
    let body = ConvexBody::exp_family(dirs, 3.0)?;
    let graphs = [
        ContactGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])?,
        // A wheel on six vertices and a seventh vertex joined to two rim vertices.
        ContactGraph::new(
            7,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 1),
                (6, 1),
                (6, 2),
            ],
        )?,
    ];
    let cfg = DensifyConfig::default();
    for (seed, graph) in graphs.iter().enumerate() {
        let out = densify_independent(&body, graph, seed as u64, &cfg)?;
        println!(
            "{} vertices, {} edges: rank {} -> {}, radial distance {:.2e} (eps {}), attempts {}",
            graph.vertex_count(),
            graph.edge_count(),
            out.initial_rank,
            out.rank,
            out.radial_distance,
            cfg.eps,
            out.attempts
        );
    }
    Ok(())
}
