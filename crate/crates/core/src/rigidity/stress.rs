//! Equilibrium stresses of contact frameworks and vertex indices.

use std::f64::consts::PI;

use super::matrix::{assemble_length_matrix, assemble_rigidity_matrix};
use super::rank::{rank_report, TolerancePolicy};
use super::{Packing, RigidityError};
use crate::body::Vec2;
use crate::sparsity::ContactGraph;

/// Entries below this (after normalization) count as zero.
const STRESS_ZERO: f64 = 1e-9;

/// Scales `a` to maximum absolute entry 1 with its first non-zero entry
/// positive. Returns `None` for the zero vector.
pub fn normalize_stress(a: &[f64]) -> Option<Vec<f64>> {
    let max = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return None;
    }
    let mut out: Vec<f64> = a.iter().map(|x| x / max).collect();
    let first = out
        .iter()
        .copied()
        .find(|x| x.abs() > STRESS_ZERO)
        .expect("max entry is 1");
    if first < 0.0 {
        out.iter_mut().for_each(|x| *x = -*x);
    }
    for x in &mut out {
        if x.abs() <= STRESS_ZERO {
            *x = 0.0;
        }
    }
    Some(out)
}

fn first_left_kernel_vector(matrix: &nalgebra::DMatrix<f64>) -> Option<Vec<f64>> {
    let report = rank_report(matrix, TolerancePolicy::Default);
    if report.left_kernel_dim() == 0 {
        return None;
    }
    normalize_stress(report.left_kernel.column(0).as_slice())
}

/// A non-zero `a : E → ℝ` with `Σ_w a_vw φ(p_v − p_w) = 0` at every vertex
/// (a self-stress of the contact framework), if one exists.
pub fn equilibrium_stress(packing: &Packing) -> Result<Option<Vec<f64>>, RigidityError> {
    let m = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    Ok(first_left_kernel_vector(&m))
}

/// A non-zero `a : E → ℝ` that is both a self-stress and satisfies
/// `Σ_w a_vw ‖p_v − p_w‖ = 0` at every vertex, if one exists.
pub fn edge_length_stress(packing: &Packing) -> Result<Option<Vec<f64>>, RigidityError> {
    let m = assemble_length_matrix(packing)?;
    Ok(first_left_kernel_vector(&m.matrix))
}

/// Number of cyclic sign changes of the stress around `v`, with the
/// neighbours carrying non-zero stress ordered by the angle of `p_w − p_v`.
/// Ties in angle are broken by edge index.
pub fn vertex_index(
    p: &[Vec2],
    graph: &ContactGraph,
    a: &[f64],
    v: usize,
) -> Result<usize, RigidityError> {
    if a.len() != graph.edge_count() {
        return Err(RigidityError::Shape(format!(
            "stress has {} entries for {} edges",
            a.len(),
            graph.edge_count()
        )));
    }
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut around: Vec<(f64, usize, f64)> = graph
        .neighbors(v)
        .iter()
        .filter_map(|&w| {
            let e = graph.edge_index(v, w).expect("neighbour edge");
            if a[e].abs() <= STRESS_ZERO * scale || a[e] == 0.0 {
                return None;
            }
            let d = p[w] - p[v];
            let mut angle = d.y.atan2(d.x);
            if angle <= -PI {
                angle += 2.0 * PI;
            }
            Some((angle, e, a[e]))
        })
        .collect();
    if around.is_empty() {
        return Err(RigidityError::NotRelevant(v));
    }
    around.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let len = around.len();
    Ok((0..len)
        .filter(|&i| (around[i].2 > 0.0) != (around[(i + 1) % len].2 > 0.0))
        .count())
}

/// Vertex indices of a stress together with the upper bound
/// `Σ I_v ≤ 4|V'| − 8` for planar frameworks and the per-vertex lower
/// bound `I_v ≥ 4` that edge-length stresses must meet.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexBoundReport {
    /// `a` balances `φ(p_v − p_w)` at every vertex.
    pub is_equilibrium: bool,
    /// `(v, I_v)` for every relevant vertex.
    pub indices: Vec<(usize, usize)>,
    pub sum: usize,
    /// `4|V'| − 8`, absent when there are no relevant vertices.
    pub upper_bound: Option<i64>,
    pub upper_bound_holds: bool,
    /// Relevant vertices with `I_v < 4`.
    pub below_lower_bound: Vec<usize>,
}

pub fn index_bound_check(packing: &Packing, a: &[f64]) -> Result<IndexBoundReport, RigidityError> {
    let m = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    if a.len() != packing.edge_count() {
        return Err(RigidityError::Shape(format!(
            "stress has {} entries for {} edges",
            a.len(),
            packing.edge_count()
        )));
    }
    let stress = nalgebra::DVector::from_column_slice(a);
    let scale = m.norm() * stress.norm();
    let is_equilibrium = scale > 0.0 && (m.transpose() * &stress).norm() <= 1e-9 * scale;
    if !is_equilibrium {
        return Ok(IndexBoundReport {
            is_equilibrium,
            indices: Vec::new(),
            sum: 0,
            upper_bound: None,
            upper_bound_holds: true,
            below_lower_bound: Vec::new(),
        });
    }
    let mut indices = Vec::new();
    for v in 0..packing.vertex_count() {
        match vertex_index(&packing.p, &packing.graph, a, v) {
            Ok(i) => indices.push((v, i)),
            Err(RigidityError::NotRelevant(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let sum = indices.iter().map(|(_, i)| i).sum();
    let upper_bound = (!indices.is_empty()).then(|| 4 * indices.len() as i64 - 8);
    Ok(IndexBoundReport {
        is_equilibrium,
        upper_bound_holds: upper_bound.is_none_or(|b| sum as i64 <= b),
        below_lower_bound: indices
            .iter()
            .filter(|(_, i)| *i < 4)
            .map(|(v, _)| *v)
            .collect(),
        indices,
        sum,
        upper_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Star around vertex 0 with the neighbours and stresses of the
    /// single-vertex index illustration, plus one zero-stress edge.
    fn figure_star() -> (Vec<Vec2>, ContactGraph, Vec<f64>) {
        let angles = [PI, PI / 2.0, 0.0, -PI / 2.0, PI / 4.0];
        let mut p = vec![Vec2::zeros()];
        p.extend(angles.iter().map(|t| Vec2::new(t.cos(), t.sin())));
        let g = ContactGraph::new(6, (1..6).map(|w| (0, w))).unwrap();
        let a = vec![3.0, -(2.0f64).sqrt(), -1.0, 0.2, 0.0];
        (p, g, a)
    }

    #[test]
    fn illustrated_vertex_has_index_two() {
        let (p, g, a) = figure_star();
        assert_eq!(vertex_index(&p, &g, &a, 0).unwrap(), 2);
    }

    #[test]
    fn index_is_zero_for_uniform_sign_and_direction_free() {
        let (p, g, _) = figure_star();
        assert_eq!(
            vertex_index(&p, &g, &[1.0, 2.0, 0.5, 3.0, 1.0], 0).unwrap(),
            0
        );
        let (p, g, a) = figure_star();
        let mirrored: Vec<Vec2> = p.iter().map(|x| Vec2::new(x.x, -x.y)).collect();
        assert_eq!(
            vertex_index(&mirrored, &g, &a, 0).unwrap(),
            vertex_index(&p, &g, &a, 0).unwrap()
        );
        assert!(matches!(
            vertex_index(&p, &g, &[0.0; 5], 0),
            Err(RigidityError::NotRelevant(0))
        ));
    }

    #[test]
    fn normalization_is_deterministic() {
        assert_eq!(
            normalize_stress(&[-0.5, -0.5, 0.5, 0.5]).unwrap(),
            vec![1.0, 1.0, -1.0, -1.0]
        );
        assert_eq!(normalize_stress(&[0.0, 0.0]), None);
    }
}
