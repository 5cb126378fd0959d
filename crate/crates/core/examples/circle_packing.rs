//! Circle packing of a triangulation.
//!
//! Packs K4 with the outer triangle pinned and compares the inner radius
//! with the Descartes circle theorem, then packs a random triangulation and
//! moves it into general position with a Möbius transformation.
//!
//! ```bash
//! cargo run --example circle_packing
//! ```

use packrigid::packer::{circle_pack, edge_parallelism, mobius_general_position, PinnedTriangle};
use packrigid::sparsity::{random_triangulation, ContactGraph, Triangulation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k4 = Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2]))?;
    let solved = circle_pack(&k4, &PinnedTriangle::standard(k4.outer))?;
    let inner = solved.packing.r[3];
    let outer = solved.packing.r[0];
    // Three mutually tangent unit circles hold an inner one of radius 1/(3 + 2√3).
    let expected = outer / (3.0 + 2.0 * 3f64.sqrt());
    println!("K4 outer radius {outer:.12}, inner radius {inner:.12}");
    println!(
        "Descartes prediction      {expected:.12} (error {:.2e})",
        (inner - expected).abs()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tri = random_triangulation(12, &mut rng)?;
    let packing = circle_pack(&tri, &PinnedTriangle::standard(tri.outer))?.packing;
    let moved = mobius_general_position(&packing, &mut rng)?;
    println!(
        "random triangulation: {} vertices, {} edges, max contact residual {:.2e}",
        packing.vertex_count(),
        packing.edge_count(),
        packing.feasibility()?.max_edge_residual
    );
    println!(
        "edge parallelism before {:.3e}, after the Möbius map {:.3e}",
        edge_parallelism(&packing),
        edge_parallelism(&moved)
    );
    Ok(())
}
