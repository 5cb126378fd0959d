//! The square-body packing whose contact framework carries a stress.

use std::sync::Arc;

use super::HarnessError;
use crate::body::{ConvexBody, Vec2};
use crate::rigidity::{Packing, FEASIBILITY_TOLERANCE};
use crate::sparsity::ContactGraph;

/// Four squares on a 4-cycle: two of radius `1 + 2t` at `±(1+t)(x₁ + x₂)`
/// and two of radius 1 at `±t(x₁ − x₂)`, where `[x₁, x₂]` is the left
/// side of `[−1, 1]²`. The small squares are disjoint for `t > 1/2`.
pub fn square_counterexample(t: f64) -> Result<Packing, HarnessError> {
    if !(t.is_finite() && t > 0.5) {
        return Err(HarnessError::Config(format!(
            "t = {t} makes the two small squares overlap; t must exceed 1/2"
        )));
    }
    let x1 = Vec2::new(-1.0, 1.0);
    let x2 = Vec2::new(-1.0, -1.0);
    let p = vec![
        (x1 + x2) * (1.0 + t),
        (x1 - x2) * t,
        -(x1 + x2) * (1.0 + t),
        -(x1 - x2) * t,
    ];
    let r = vec![1.0 + 2.0 * t, 1.0, 1.0 + 2.0 * t, 1.0];
    let graph = ContactGraph::cycle(4);
    let packing = Packing::new(graph, Arc::new(ConvexBody::square()), p, r)?;
    packing.check_feasible(FEASIBILITY_TOLERANCE)?;
    Ok(packing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_and_graph() {
        let p = square_counterexample(2.0).unwrap();
        assert_eq!(p.r, vec![5.0, 1.0, 5.0, 1.0]);
        assert_eq!(p.graph.edges(), &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert!(square_counterexample(0.5).is_err());
    }
}
