//! Turning a packing of a planar (2,2)-sparse graph into an independent
//! one by a small change of the body near its contact directions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::trials::{random_pins, trial_rng};
use super::HarnessError;
use crate::body::{radial_distance, retarget_supports, ConvexBody, Vec2};
use crate::packer::{
    body_pack, continue_packing, edge_parallelism, general_edge_condition, subgraph_flow,
    ContinuationConfig, PinnedTriangle,
};
use crate::rigidity::{independence_report, Packing, TolerancePolicy};
use crate::sparsity::{pebble_sparse, triangulate_planar, ContactGraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensifyConfig {
    /// Bound on the radial distance between the input and output bodies.
    pub eps: f64,
    /// Relative size of the random change of each support direction.
    pub perturbation: f64,
    /// Whole-pipeline attempts, each with a fresh pinned triangle.
    pub retries: usize,
    /// Relative flow time of the opening flow.
    pub flow_time: f64,
    pub flow_steps: usize,
}

impl Default for DensifyConfig {
    fn default() -> Self {
        Self {
            eps: 1e-2,
            perturbation: 1e-3,
            retries: 5,
            flow_time: 0.1,
            flow_steps: 20,
        }
    }
}

/// Result of [`densify_independent`].
#[derive(Clone, Debug)]
pub struct Densified {
    pub body: ConvexBody,
    pub packing: Packing,
    /// Rank of `R_C(G,p)` for the input body before reshaping.
    pub initial_rank: usize,
    /// Rank of `R_C'(G,p)` for the reshaped body.
    pub rank: usize,
    /// `max_t |F_C(t) − F_C'(t)|`.
    pub radial_distance: f64,
    /// Attempts used, starting at 1.
    pub attempts: usize,
    /// Smallest normalized determinant of two edge vectors.
    pub edge_parallelism: f64,
}

impl Densified {
    pub fn is_independent(&self) -> bool {
        self.rank == self.packing.edge_count()
    }
}

/// Pins for attempt `attempt`: the standard triangle, then random ones.
fn attempt_pins<R: Rng + ?Sized>(outer: [usize; 3], attempt: usize, rng: &mut R) -> PinnedTriangle {
    if attempt == 0 {
        PinnedTriangle::standard(outer)
    } else {
        random_pins(outer, rng)
    }
}

/// Packs `graph` for `body` via a triangulation and the opening flow,
/// retrying until the edge vectors are in general position, then reshapes
/// the body so that the support direction of every contact moves by a
/// small random amount. The packing stays a packing of the new body, whose
/// rigidity matrix then has full row rank.
pub fn densify_independent(
    body: &ConvexBody,
    graph: &ContactGraph,
    seed: u64,
    cfg: &DensifyConfig,
) -> Result<Densified, HarnessError> {
    if !(body.is_regular() && body.has_positive_curvature()) {
        return Err(HarnessError::Config(
            "densification needs a smooth body with positive curvature".into(),
        ));
    }
    if !pebble_sparse(graph, 2).is_sparse() {
        return Err(HarnessError::Config("the graph is not (2,2)-sparse".into()));
    }
    if !(cfg.eps > 0.0 && cfg.perturbation >= 0.0 && cfg.retries > 0) {
        return Err(HarnessError::Config(format!("{cfg:?}")));
    }
    let tri = triangulate_planar(graph)?;
    let solver = ContinuationConfig::default();
    let mut rng = trial_rng(seed, 0);
    let mut last = String::new();
    for attempt in 0..cfg.retries {
        let pins = attempt_pins(tri.outer, attempt, &mut rng);
        match densify_once(body, graph, &tri, &pins, cfg, &solver, &mut rng) {
            Ok(mut out) => {
                out.attempts = attempt + 1;
                return Ok(out);
            }
            Err(e) => last = e.to_string(),
        }
    }
    Err(HarnessError::RetriesExhausted {
        attempts: cfg.retries,
        last,
    })
}

fn densify_once<R: Rng + ?Sized>(
    body: &ConvexBody,
    graph: &ContactGraph,
    tri: &crate::sparsity::Triangulation,
    pins: &PinnedTriangle,
    cfg: &DensifyConfig,
    solver: &ContinuationConfig,
    rng: &mut R,
) -> Result<Densified, HarnessError> {
    let stage = |name: &str, e: &dyn std::fmt::Display| HarnessError::Stage {
        stage: name.to_string(),
        message: e.to_string(),
    };
    let packed = body_pack(body, tri, pins, solver).map_err(|e| stage("pack", &e))?;
    let opened = subgraph_flow(
        &packed.packing,
        pins,
        graph,
        cfg.flow_time,
        cfg.flow_steps,
        solver,
    )
    .map_err(|e| stage("flow", &e))?
    .packing;
    if !general_edge_condition(&opened) {
        return Err(stage(
            "general position",
            &format!(
                "edge vectors nearly parallel ({:e})",
                edge_parallelism(&opened)
            ),
        ));
    }
    let initial_rank = independence_report(&opened, TolerancePolicy::Default)?.rank;

    let mut contacts = Vec::with_capacity(graph.edge_count());
    let mut supports = Vec::with_capacity(graph.edge_count());
    for &(u, v) in graph.edges() {
        let d = opened.p[u] - opened.p[v];
        let x = d / body.norm(&d)?;
        contacts.push(x);
        supports.push(body.duality_map(&x)?);
    }
    let mut size = cfg.perturbation;
    let mut last = String::new();
    for _ in 0..6 {
        let targets: Vec<Vec2> = supports
            .iter()
            .map(|y| {
                let turn = size * rng.gen_range(-1.0..=1.0);
                let (s, c) = turn.sin_cos();
                Vec2::new(c * y.x - s * y.y, s * y.x + c * y.y)
            })
            .collect();
        let reshaped = match retarget_supports(body, &contacts, &targets, cfg.eps) {
            Ok(out) => out,
            Err(e) => {
                last = e.to_string();
                size *= 0.5;
                continue;
            }
        };
        let candidate = opened.with_body(reshaped.body.clone());
        let solved = match continue_packing(&candidate, &reshaped.body, solver) {
            Ok(solved) => solved,
            Err(e) => {
                last = e.to_string();
                size *= 0.5;
                continue;
            }
        };
        let rank = independence_report(&solved.packing, TolerancePolicy::Default)?.rank;
        let distance = radial_distance(body, &reshaped.body)?;
        return Ok(Densified {
            edge_parallelism: edge_parallelism(&solved.packing),
            body: reshaped.body,
            packing: solved.packing,
            initial_rank,
            rank,
            radial_distance: distance,
            attempts: 0,
        });
    }
    Err(stage("retarget", &last))
}
