//! Packings, their rigidity and packing rigidity matrices, numerical rank,
//! independence and infinitesimal rigidity, and equilibrium stresses.

mod matrix;
mod rank;
mod stress;

use std::sync::Arc;

use thiserror::Error;

use crate::body::{BodyError, BodyRef, ConvexBody, Vec2};
use crate::sparsity::ContactGraph;

pub use matrix::{
    assemble_length_matrix, assemble_packing_matrix, assemble_rigidity_matrix, packing_jacobian,
    packing_map, rigidity_map, ColumnLabel, PackingRigidityMatrix,
};
pub use rank::{
    independence_report, independence_test, infinitesimal_rigidity_test, isometry_dimension,
    null_space, radii_projection_check, rank_report, trivial_flexes, IndependenceReport,
    InfinitesimalRigidity, RadiiProjection, RankReport, RigidityVerdict, TolerancePolicy,
    SWEEP_FACTORS,
};
pub use stress::{
    edge_length_stress, equilibrium_stress, index_bound_check, normalize_stress, vertex_index,
    IndexBoundReport,
};

/// Tolerance of the contact feasibility invariant.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigidityError {
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error("edge {edge} = ({u}, {v}) points in a non-smooth direction of the body")]
    NonSmoothEdge { edge: usize, u: usize, v: usize },
    #[error("edge {edge} = ({u}, {v}) joins coincident centres")]
    Coincident { edge: usize, u: usize, v: usize },
    #[error("{0}")]
    Shape(String),
    #[error("kernel dimension {kernel_dim} is below the isometry dimension {k}; trivial flexes are missing")]
    MissingTrivialFlexes { kernel_dim: usize, k: usize },
    #[error("vertex {0} has no incident edge with non-zero stress")]
    NotRelevant(usize),
    #[error("packing is infeasible: {0}")]
    Infeasible(String),
}

/// A homothetic packing `(G, p, r)` of a convex body.
#[derive(Clone, Debug)]
pub struct Packing {
    pub graph: ContactGraph,
    pub body: BodyRef,
    pub p: Vec<Vec2>,
    pub r: Vec<f64>,
}

/// Contact residuals of a packing in the body's gauge.
#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    /// `max |‖p_v − p_w‖ − (r_v + r_w)|` over edges.
    pub max_edge_residual: f64,
    /// `min ‖p_v − p_w‖ − (r_v + r_w)` over non-adjacent pairs.
    pub min_nonedge_gap: f64,
    pub closest_nonedge: Option<(usize, usize)>,
}

impl Feasibility {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_edge_residual <= tol && self.min_nonedge_gap > tol
    }
}

impl Packing {
    pub fn new(
        graph: ContactGraph,
        body: BodyRef,
        p: Vec<Vec2>,
        r: Vec<f64>,
    ) -> Result<Self, RigidityError> {
        let n = graph.vertex_count();
        if p.len() != n || r.len() != n {
            return Err(RigidityError::Shape(format!(
                "graph has {n} vertices but {} centres and {} radii were given",
                p.len(),
                r.len()
            )));
        }
        if let Some(v) = p.iter().position(|x| !(x.x.is_finite() && x.y.is_finite())) {
            return Err(RigidityError::Shape(format!(
                "centre of vertex {v} is not finite"
            )));
        }
        if let Some(v) = r.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(RigidityError::Shape(format!(
                "radius of vertex {v} is {} (must be positive)",
                r[v]
            )));
        }
        Ok(Self { graph, body, p, r })
    }

    pub fn with_body(&self, body: ConvexBody) -> Self {
        Self {
            body: Arc::new(body),
            ..self.clone()
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `‖p_u − p_v‖ − (r_u + r_v)` in the body's gauge.
    pub fn gap(&self, u: usize, v: usize) -> Result<f64, RigidityError> {
        Ok(self.body.norm(&(self.p[u] - self.p[v]))? - (self.r[u] + self.r[v]))
    }

    /// Gap of every edge, in edge order.
    pub fn edge_residuals(&self) -> Result<Vec<f64>, RigidityError> {
        self.graph
            .edges()
            .iter()
            .map(|&(u, v)| self.gap(u, v))
            .collect()
    }

    pub fn feasibility(&self) -> Result<Feasibility, RigidityError> {
        let mut max_edge_residual: f64 = 0.0;
        for g in self.edge_residuals()? {
            max_edge_residual = max_edge_residual.max(g.abs());
        }
        let mut min_nonedge_gap = f64::INFINITY;
        let mut closest_nonedge = None;
        for (u, v) in self.graph.non_edges() {
            let g = self.gap(u, v)?;
            if g < min_nonedge_gap {
                min_nonedge_gap = g;
                closest_nonedge = Some((u, v));
            }
        }
        Ok(Feasibility {
            max_edge_residual,
            min_nonedge_gap,
            closest_nonedge,
        })
    }

    /// Checks the feasibility invariant: edges touch and non-edges are
    /// separated, both to `tol`.
    pub fn check_feasible(&self, tol: f64) -> Result<Feasibility, RigidityError> {
        let f = self.feasibility()?;
        if f.max_edge_residual > tol {
            return Err(RigidityError::Infeasible(format!(
                "an edge misses contact by {:e}",
                f.max_edge_residual
            )));
        }
        if f.min_nonedge_gap <= tol {
            let (u, v) = f.closest_nonedge.expect("a non-edge exists");
            return Err(RigidityError::Infeasible(format!(
                "non-adjacent vertices {u} and {v} have gap {:e}",
                f.min_nonedge_gap
            )));
        }
        Ok(f)
    }

    /// Contact graph recomputed from the geometry: pairs whose gap is at
    /// most `tol` in absolute value.
    pub fn recomputed_contact_graph(&self, tol: f64) -> Result<ContactGraph, RigidityError> {
        let n = self.vertex_count();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if self.gap(u, v)?.abs() <= tol {
                    edges.push((u, v));
                }
            }
        }
        ContactGraph::new(n, edges).map_err(|e| RigidityError::Shape(e.to_string()))
    }

    /// Whether two contact segments cross away from shared endpoints.
    pub fn has_crossing_segments(&self) -> bool {
        crossing_pair(&self.graph, &self.p).is_some()
    }
}

/// First pair of edges whose segments `p_u p_v` meet other than at a
/// shared endpoint.
pub fn crossing_pair(graph: &ContactGraph, p: &[Vec2]) -> Option<(usize, usize)> {
    let edges = graph.edges();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            let shared = if a == c || a == d {
                Some(a)
            } else if b == c || b == d {
                Some(b)
            } else {
                None
            };
            if let Some(s) = shared {
                // Adjacent segments only meet badly when they overlap collinearly.
                let x = if a == s { b } else { a };
                let y = if c == s { d } else { c };
                let (u, w) = (p[x] - p[s], p[y] - p[s]);
                let cross = u.x * w.y - u.y * w.x;
                if cross.abs() <= 1e-12 * u.norm() * w.norm() && u.dot(&w) > 0.0 {
                    return Some((i, j));
                }
                continue;
            }
            if segments_cross(p[a], p[b], p[c], p[d]) {
                return Some((i, j));
            }
        }
    }
    None
}

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let orient = |p: Vec2, q: Vec2, r: Vec2| (q - p).x * (r - p).y - (q - p).y * (r - p).x;
    let (d1, d2) = (orient(a, b, c), orient(a, b, d));
    let (d3, d4) = (orient(c, d, a), orient(c, d, b));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4)
}
