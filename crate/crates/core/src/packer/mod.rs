//! Packing construction: circle packings of triangulations, Möbius
//! general position, homotopy continuation onto other bodies, the
//! subgraph-opening flow and re-solving after body or radius changes.

mod circle;
mod continuation;
mod flow;
mod homotopy;
mod newton;

use thiserror::Error;

use crate::body::{BodyError, Vec2};
use crate::rigidity::RigidityError;
use crate::sparsity::{ContactGraph, GraphError};

pub use circle::{
    circle_pack, edge_parallelism, general_edge_condition, mobius_general_position,
    GENERAL_EDGE_TOLERANCE,
};
pub use continuation::{continue_packing, independent_columns, resolve_with_radii};
pub use flow::{subgraph_flow, FlowOutcome};
pub use homotopy::body_pack;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PackerError {
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid pinned triangle: {0}")]
    Pins(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("the body must be smooth and strictly convex")]
    NotRegular,
    #[error(
        "circle packing radii did not converge (angle-sum error {error:e} after {sweeps} sweeps)"
    )]
    CirclePacking { error: f64, sweeps: usize },
    #[error("Newton iteration stalled with residual {residual:e} after {iterations} iterations")]
    NewtonStalled { residual: f64, iterations: usize },
    #[error("Jacobian is numerically singular (condition {condition:e})")]
    Singular { condition: f64 },
    #[error("continuation step fell below the minimum at s = {s} ({reason})")]
    StepUnderflow { s: f64, reason: String },
    #[error("packing lost feasibility: {0}")]
    Infeasible(String),
    #[error("the packing is not independent (rank {rank} < {edges} edges)")]
    Dependent { rank: usize, edges: usize },
    #[error("no general-position transform found in {0} attempts")]
    RetriesExhausted(usize),
}

/// Three pairwise adjacent vertices and the centres they are held at.
#[derive(Clone, Debug, PartialEq)]
pub struct PinnedTriangle {
    pub vertices: [usize; 3],
    pub positions: [Vec2; 3],
}

impl PinnedTriangle {
    pub fn new(vertices: [usize; 3], positions: [Vec2; 3]) -> Result<Self, PackerError> {
        let pins = Self {
            vertices,
            positions,
        };
        if vertices[0] == vertices[1] || vertices[1] == vertices[2] || vertices[0] == vertices[2] {
            return Err(PackerError::Pins(format!(
                "vertices {vertices:?} are not distinct"
            )));
        }
        if pins.signed_area().abs() <= 1e-9 {
            return Err(PackerError::Pins(format!(
                "positions {positions:?} are collinear"
            )));
        }
        Ok(pins)
    }

    /// An equilateral triangle of side 2 centred at the origin.
    pub fn standard(vertices: [usize; 3]) -> Self {
        let h = 3f64.sqrt();
        Self::new(
            vertices,
            [
                Vec2::new(-1.0, -h / 3.0),
                Vec2::new(1.0, -h / 3.0),
                Vec2::new(0.0, 2.0 * h / 3.0),
            ],
        )
        .expect("equilateral triangle")
    }

    pub fn signed_area(&self) -> f64 {
        let [a, b, c] = self.positions;
        0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x)
    }

    /// Checks the vertices are in range and pairwise adjacent.
    pub fn check_against(&self, graph: &ContactGraph) -> Result<(), PackerError> {
        let n = graph.vertex_count();
        for (i, &u) in self.vertices.iter().enumerate() {
            if u >= n {
                return Err(PackerError::Pins(format!("vertex {u} is out of range")));
            }
            let v = self.vertices[(i + 1) % 3];
            if !graph.has_edge(u, v) {
                return Err(PackerError::Pins(format!(
                    "pinned vertices {u} and {v} are not adjacent"
                )));
            }
        }
        Ok(())
    }

    /// Whether `x` lies in the closed pinned triangle.
    pub fn contains(&self, x: &Vec2) -> bool {
        let [a, b, c] = self.positions;
        let orient = |p: Vec2, q: Vec2| (q - p).x * (x - p).y - (q - p).y * (x - p).x;
        let s = self.signed_area().signum();
        [orient(a, b), orient(b, c), orient(c, a)]
            .iter()
            .all(|o| o * s >= -1e-12)
    }
}

/// Step control for the continuation and Newton solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationConfig {
    /// First homotopy step `Δs`.
    pub initial_step: f64,
    /// Smallest admissible homotopy step.
    pub min_step: f64,
    /// Convergence threshold on `max |h_vw| / (r_v + r_w)`.
    pub newton_tolerance: f64,
    pub max_newton_iterations: usize,
    /// Backtracking factor of the line search on `‖h‖₂`.
    pub damping: f64,
    pub max_backtracks: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            min_step: 1e-4,
            newton_tolerance: 1e-12,
            max_newton_iterations: 40,
            damping: 0.5,
            max_backtracks: 8,
        }
    }
}

impl ContinuationConfig {
    pub fn validate(&self) -> Result<(), PackerError> {
        let ok = self.min_step > 0.0
            && self.min_step <= self.initial_step
            && self.initial_step <= 1.0
            && self.newton_tolerance > 0.0
            && self.damping > 0.0
            && self.damping < 1.0
            && self.max_newton_iterations > 0;
        if ok {
            Ok(())
        } else {
            Err(PackerError::Config(format!("{self:?}")))
        }
    }
}

/// Per-step record of a continuation run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepRecord {
    /// Homotopy parameter or flow time reached.
    pub s: f64,
    pub newton_iterations: usize,
    /// Condition number of the Jacobian at the accepted point.
    pub condition: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub steps: Vec<StepRecord>,
    /// Homotopy or flow steps that were rejected and retried smaller.
    pub rejected_steps: usize,
    pub newton_iterations: usize,
    /// Final `max |‖p_v − p_w‖ − (r_v + r_w)|` over contacts.
    pub contact_residual: f64,
    /// Final smallest gap over non-adjacent pairs.
    pub min_nonedge_gap: f64,
}

impl Diagnostics {
    pub fn max_condition(&self) -> f64 {
        self.steps.iter().map(|s| s.condition).fold(0.0, f64::max)
    }
}

/// A constructed packing together with solver diagnostics.
#[derive(Clone, Debug)]
pub struct Solved {
    pub packing: crate::rigidity::Packing,
    pub diagnostics: Diagnostics,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_triangle_validation() {
        assert!(PinnedTriangle::new(
            [0, 1, 2],
            [Vec2::zeros(), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)]
        )
        .is_err());
        assert!(PinnedTriangle::new(
            [0, 0, 2],
            [Vec2::zeros(), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]
        )
        .is_err());
        let t = PinnedTriangle::standard([0, 1, 2]);
        assert!(t.signed_area() > 0.0);
        assert!(t.contains(&Vec2::zeros()));
        assert!(!t.contains(&Vec2::new(5.0, 0.0)));
        let g = ContactGraph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(t.check_against(&g).is_err());
        assert!(t.check_against(&ContactGraph::complete(3)).is_ok());
    }

    #[test]
    fn default_config_is_valid() {
        ContinuationConfig::default().validate().unwrap();
        let bad = ContinuationConfig {
            min_step: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
