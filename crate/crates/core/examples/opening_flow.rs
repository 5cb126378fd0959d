//! Opening contacts of a packing.
//!
//! For a few seeds: packs a random triangulation with an exp-family body,
//! flows it to a random connected spanning subgraph, perturbs the radii and
//! re-solves with the contact graph held. A result is checked for sparsity,
//! planarity and independence. When a non-contact pair would have to
//! overlap, the re-solve fails and the example says so.
//!
//! ```bash
//! cargo run --example opening_flow
//! ```

use packrigid::body::{ConvexBody, Vec2};
use packrigid::packer::{
    body_pack, resolve_with_radii, subgraph_flow, ContinuationConfig, PinnedTriangle,
};
use packrigid::rigidity::{independence_report, TolerancePolicy};
use packrigid::sparsity::{pebble_sparse, random_connected_subgraph, random_triangulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dirs = vec![
        Vec2::new(1.0, 0.0),
        Vec2::new(0.3, 1.0),
        Vec2::new(-0.8, 0.6),
    ];
    let body = ConvexBody::exp_family(dirs, 3.0)?;
    let cfg = ContinuationConfig::default();
    let n = 9;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tri = random_triangulation(n, &mut rng)?;
        let pins = PinnedTriangle::standard(tri.outer);
        let packed = body_pack(&body, &tri, &pins, &cfg)?.packing;

        let keep = random_connected_subgraph(&tri.graph, 2 * n - 3, &mut rng)?;
        let sub = tri.graph.edge_subgraph(&keep);
        let flow = subgraph_flow(&packed, &pins, &sub, 0.1, 20, &cfg)?;
        print!(
            "seed {seed}: kept {} of {} contacts, flow time {:.3}, min gap {:.1e}; ",
            sub.edge_count(),
            tri.graph.edge_count(),
            flow.t_reached,
            flow.diagnostics.min_nonedge_gap
        );

        let radii: Vec<f64> = flow
            .packing
            .r
            .iter()
            .map(|r| r * (1.0 + 1e-3 * rng.gen_range(-1.0..1.0)))
            .collect();
        let resolved = match resolve_with_radii(&flow.packing, &radii, &cfg) {
            Ok(solved) => solved.packing,
            Err(e) => {
                println!("graph not held: {e}");
                continue;
            }
        };
        let report = independence_report(&resolved, TolerancePolicy::Default)?;
        println!(
            "(2,2)-sparse {}, non-crossing {}, rank {}/{}",
            pebble_sparse(&resolved.graph, 2).is_sparse(),
            !resolved.has_crossing_segments(),
            report.rank,
            report.edges,
        );
    }
    Ok(())
}
