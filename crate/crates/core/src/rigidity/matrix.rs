//! Assembly of the rigidity matrix `R_C(G,p)` and the packing rigidity
//! matrix `[R_C(G,p) | I(G,r)]`.

use nalgebra::DMatrix;

use super::{Packing, RigidityError};
use crate::body::{BodyError, ConvexBody, Vec2};
use crate::sparsity::ContactGraph;

/// Meaning of a column of a packing rigidity matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnLabel {
    Point { vertex: usize, axis: usize },
    Radius { vertex: usize },
}

/// An `|E| × 3|V|` matrix with point columns `(v, i)` at `2v + i` followed
/// by radius columns `v` at `2|V| + v`. Row `e` belongs to edge `e`.
#[derive(Clone, Debug)]
pub struct PackingRigidityMatrix {
    pub matrix: DMatrix<f64>,
    pub edges: Vec<(usize, usize)>,
    pub vertex_count: usize,
}

impl PackingRigidityMatrix {
    pub fn point_column(&self, v: usize, axis: usize) -> usize {
        2 * v + axis
    }

    pub fn radius_column(&self, v: usize) -> usize {
        2 * self.vertex_count + v
    }

    pub fn column_label(&self, j: usize) -> ColumnLabel {
        let n = self.vertex_count;
        if j < 2 * n {
            ColumnLabel::Point {
                vertex: j / 2,
                axis: j % 2,
            }
        } else {
            ColumnLabel::Radius { vertex: j - 2 * n }
        }
    }

    /// The point block `R_C(G,p)`.
    pub fn point_block(&self) -> DMatrix<f64> {
        self.matrix.columns(0, 2 * self.vertex_count).into_owned()
    }

    /// The radius block `I(G,r)`.
    pub fn radius_block(&self) -> DMatrix<f64> {
        self.matrix
            .columns(2 * self.vertex_count, self.vertex_count)
            .into_owned()
    }
}

fn edge_support(
    body: &ConvexBody,
    p: &[Vec2],
    edge: usize,
    u: usize,
    v: usize,
) -> Result<Vec2, RigidityError> {
    let x = p[u] - p[v];
    if x.x == 0.0 && x.y == 0.0 {
        return Err(RigidityError::Coincident { edge, u, v });
    }
    body.duality_map(&x).map_err(|e| match e {
        BodyError::NonSmooth { .. } => RigidityError::NonSmoothEdge { edge, u, v },
        other => RigidityError::Body(other),
    })
}

/// `R_C(G,p)`: row `vw` holds `φ(p_v − p_w)` in the columns of `v` and
/// `φ(p_w − p_v)` in those of `w`.
pub fn assemble_rigidity_matrix(
    body: &ConvexBody,
    graph: &ContactGraph,
    p: &[Vec2],
) -> Result<DMatrix<f64>, RigidityError> {
    let n = graph.vertex_count();
    if p.len() != n {
        return Err(RigidityError::Shape(format!(
            "{} centres for {n} vertices",
            p.len()
        )));
    }
    let mut m = DMatrix::zeros(graph.edge_count(), 2 * n);
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let y = edge_support(body, p, e, u, v)?;
        m[(e, 2 * u)] = y.x;
        m[(e, 2 * u + 1)] = y.y;
        m[(e, 2 * v)] = -y.x;
        m[(e, 2 * v + 1)] = -y.y;
    }
    Ok(m)
}

fn assemble_with_radii(
    packing: &Packing,
    radius_entry: impl Fn(usize, usize) -> Result<f64, RigidityError>,
) -> Result<PackingRigidityMatrix, RigidityError> {
    let n = packing.vertex_count();
    let point = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    let mut m = DMatrix::zeros(packing.edge_count(), 3 * n);
    m.columns_mut(0, 2 * n).copy_from(&point);
    for (e, &(u, v)) in packing.graph.edges().iter().enumerate() {
        let entry = radius_entry(u, v)?;
        m[(e, 2 * n + u)] = entry;
        m[(e, 2 * n + v)] = entry;
    }
    Ok(PackingRigidityMatrix {
        matrix: m,
        edges: packing.graph.edges().to_vec(),
        vertex_count: n,
    })
}

/// `[R_C(G,p) | I(G,r)]` with radius entries `−(r_v + r_w)`; the Jacobian
/// of [`packing_map`].
pub fn assemble_packing_matrix(packing: &Packing) -> Result<PackingRigidityMatrix, RigidityError> {
    assemble_with_radii(packing, |u, v| Ok(-(packing.r[u] + packing.r[v])))
}

/// The packing matrix with `r_v + r_w` replaced by `‖p_v − p_w‖`. Its left
/// kernel consists of the edge-length equilibrium stresses.
pub fn assemble_length_matrix(packing: &Packing) -> Result<PackingRigidityMatrix, RigidityError> {
    assemble_with_radii(packing, |u, v| {
        Ok(-packing.body.norm(&(packing.p[u] - packing.p[v]))?)
    })
}

/// Jacobian of [`packing_map`] at an arbitrary configuration `(p, r)`,
/// which need not be a packing.
pub fn packing_jacobian(
    body: &ConvexBody,
    graph: &ContactGraph,
    p: &[Vec2],
    r: &[f64],
) -> Result<DMatrix<f64>, RigidityError> {
    let n = graph.vertex_count();
    let mut m = DMatrix::zeros(graph.edge_count(), 3 * n);
    m.columns_mut(0, 2 * n)
        .copy_from(&assemble_rigidity_matrix(body, graph, p)?);
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        m[(e, 2 * n + u)] = -(r[u] + r[v]);
        m[(e, 2 * n + v)] = -(r[u] + r[v]);
    }
    Ok(m)
}

/// `f(p)_vw = ½‖p_v − p_w‖²`, whose Jacobian is `R_C(G,p)`.
pub fn rigidity_map(
    body: &ConvexBody,
    graph: &ContactGraph,
    p: &[Vec2],
) -> Result<Vec<f64>, RigidityError> {
    graph
        .edges()
        .iter()
        .map(|&(u, v)| Ok(0.5 * body.norm(&(p[u] - p[v]))?.powi(2)))
        .collect()
}

/// `h(p, r)_vw = ½(‖p_v − p_w‖² − (r_v + r_w)²)`.
pub fn packing_map(
    body: &ConvexBody,
    graph: &ContactGraph,
    p: &[Vec2],
    r: &[f64],
) -> Result<Vec<f64>, RigidityError> {
    graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let d = body.norm(&(p[u] - p[v]))?;
            Ok(0.5 * (d * d - (r[u] + r[v]).powi(2)))
        })
        .collect()
}
