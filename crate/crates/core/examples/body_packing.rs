//! Packing a triangulation with a non-Euclidean body.
//!
//! Starts from the circle packing and follows the homotopy to a 3-norm
//! ball, printing the step history and the final contact residual.
//!
//! ```bash
//! cargo run --example body_packing
//! ```

use packrigid::body::ConvexBody;
use packrigid::packer::{body_pack, ContinuationConfig, PinnedTriangle};
use packrigid::rigidity::independence_report;
use packrigid::rigidity::TolerancePolicy;
use packrigid::sparsity::random_triangulation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tri = random_triangulation(10, &mut rng)?;
    let pins = PinnedTriangle::standard(tri.outer);
    let body = ConvexBody::pnorm(3.0)?;
    let solved = body_pack(&body, &tri, &pins, &ContinuationConfig::default())?;
    for step in &solved.diagnostics.steps {
        println!(
            "s = {:.4}  Newton iterations {:>2}  condition {:.2e}",
            step.s, step.newton_iterations, step.condition
        );
    }
    let d = &solved.diagnostics;
    println!(
        "rejected steps {}, max contact residual {:.2e}, min non-contact gap {:.3e}",
        d.rejected_steps, d.contact_residual, d.min_nonedge_gap
    );
    let report = independence_report(&solved.packing, TolerancePolicy::Default)?;
    println!(
        "rank of the rigidity matrix {} for {} contacts",
        report.rank, report.edges
    );
    Ok(())
}
