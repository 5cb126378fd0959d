//! A stressed packing of squares.
//!
//! Two large and two small squares touching in a 4-cycle carry a
//! self-stress of the rigidity matrix with signs (+, +, −, −). The example
//! prints the stress, the vertex indices and the rank of both matrices.
//!
//! ```bash
//! cargo run --example square_stress
//! ```

use packrigid::harness::square_counterexample;
use packrigid::rigidity::{
    assemble_length_matrix, assemble_rigidity_matrix, edge_length_stress, equilibrium_stress,
    index_bound_check, rank_report, TolerancePolicy,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let packing = square_counterexample(2.0)?;
    println!("radii {:?}", packing.r);
    println!(
        "centres {:?}",
        packing.p.iter().map(|x| (x.x, x.y)).collect::<Vec<_>>()
    );
    let rigidity = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    println!(
        "rank of the rigidity matrix {}",
        rank_report(&rigidity, TolerancePolicy::Default).rank
    );
    let lengths = assemble_length_matrix(&packing)?;
    println!(
        "rank of the edge-length system {}",
        rank_report(&lengths.matrix, TolerancePolicy::Default).rank
    );

    match equilibrium_stress(&packing)? {
        Some(a) => {
            println!("equilibrium stress {a:?}");
            let report = index_bound_check(&packing, &a)?;
            println!(
                "vertex indices {:?}, sum {}, planar bound {:?}",
                report.indices, report.sum, report.upper_bound
            );
        }
        None => println!("no equilibrium stress"),
    }
    match edge_length_stress(&packing)? {
        Some(a) => println!("edge-length stress {a:?}"),
        None => println!("no stress balances the edge lengths as well"),
    }
    Ok(())
}
