//! Opening contacts of a triangulation packing to reach a packing of a
//! spanning subgraph.

use super::homotopy::min_nonedge_gap;
use super::newton::{unpinned_columns, ContactSystem, State};
use super::{ContinuationConfig, Diagnostics, PackerError, PinnedTriangle, StepRecord};
use crate::rigidity::{Packing, FEASIBILITY_TOLERANCE};
use crate::sparsity::{ContactGraph, GraphError};

use nalgebra::DVector;

/// Result of [`subgraph_flow`].
#[derive(Clone, Debug)]
pub struct FlowOutcome {
    /// Packing whose contact graph is the requested subgraph.
    pub packing: Packing,
    /// Flow time reached; smaller than requested when a non-contact pair
    /// came close to touching.
    pub t_reached: f64,
    pub diagnostics: Diagnostics,
}

/// Velocity `R̃⁻¹ a` of the flow at `state`.
fn velocity(
    system: &ContactSystem,
    state: &State,
    a: &DVector<f64>,
) -> Result<(DVector<f64>, f64), PackerError> {
    let j = system.jacobian(state)?;
    let svd = j.svd(true, true);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !(condition < 1e13) {
        return Err(PackerError::Singular { condition });
    }
    let v = svd
        .solve(a, 0.0)
        .map_err(|e| PackerError::Config(e.to_string()))?;
    Ok((v, condition))
}

/// Integrates `α' = R̃(α)⁻¹ a` with `a_vw = (r_v + r_w)²` (initial radii)
/// on edges of the triangulation missing from `sub` and `a = 0` on the
/// others, so `h = t·a` along the flow and an opened gap grows like
/// `t (r_v + r_w) / 2`. `t_end` is therefore a relative size. Each RK4
/// step is followed by a Newton projection back onto `h = t·a`. Pinned
/// centres never move. The step is halved when a pair that is not an edge
/// of the triangulation gets too close or a radius collapses, and the flow
/// stops early once the step falls below `1/64` of the nominal one.
pub fn subgraph_flow(
    packing: &Packing,
    pins: &PinnedTriangle,
    sub: &ContactGraph,
    t_end: f64,
    steps: usize,
    cfg: &ContinuationConfig,
) -> Result<FlowOutcome, PackerError> {
    let tri = &packing.graph;
    let n = packing.vertex_count();
    if sub.vertex_count() != n {
        return Err(GraphError::Invalid(format!(
            "subgraph has {} vertices, expected {n}",
            sub.vertex_count()
        ))
        .into());
    }
    if let Some(&(u, v)) = sub.edges().iter().find(|&&(u, v)| !tri.has_edge(u, v)) {
        return Err(GraphError::Invalid(format!("subgraph edge {u}-{v} is not a contact")).into());
    }
    if !sub.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    pins.check_against(tri)?;
    if !(t_end > 0.0) || steps == 0 {
        return Err(PackerError::Config(format!(
            "t_end = {t_end}, steps = {steps}"
        )));
    }
    let a = DVector::from_iterator(
        tri.edge_count(),
        tri.edges().iter().map(|&(u, v)| {
            if sub.has_edge(u, v) {
                0.0
            } else {
                (packing.r[u] + packing.r[v]).powi(2)
            }
        }),
    );
    let start = State {
        p: packing.p.clone(),
        r: packing.r.clone(),
    };
    let mut diagnostics = Diagnostics::default();
    let finish =
        |state: State, t: f64, mut diagnostics: Diagnostics| -> Result<FlowOutcome, PackerError> {
            let out = Packing::new(sub.clone(), packing.body.clone(), state.p, state.r)?;
            let f = out
                .check_feasible(FEASIBILITY_TOLERANCE)
                .map_err(|e| PackerError::Infeasible(e.to_string()))?;
            diagnostics.contact_residual = f.max_edge_residual;
            diagnostics.min_nonedge_gap = f.min_nonedge_gap;
            Ok(FlowOutcome {
                packing: out,
                t_reached: t,
                diagnostics,
            })
        };
    if a.iter().all(|x| *x == 0.0) {
        return finish(start, 0.0, diagnostics);
    }

    let free = unpinned_columns(n, &pins.vertices);
    let body = packing.body.as_ref();
    let system = ContactSystem {
        body,
        graph: tri,
        free: &free,
        target: None,
        rank_cut: None,
    };
    let mean_r = packing.r.iter().sum::<f64>() / n as f64;
    let clearance = 1e-6 * mean_r;
    let nominal = t_end / steps as f64;
    let mut dt = nominal;
    let mut t = 0.0;
    let mut state = start;
    while t < t_end * (1.0 - 1e-12) {
        let h = dt.min(t_end - t);
        match rk4_step(&system, &state, &a, h, t, cfg) {
            Ok((next, record))
                if next.r.iter().all(|r| *r > clearance)
                    && min_nonedge_gap(body, tri, &next)? > clearance =>
            {
                diagnostics.newton_iterations += record.newton_iterations;
                diagnostics.steps.push(record);
                state = next;
                t += h;
            }
            Ok(_)
            | Err(
                PackerError::Singular { .. }
                | PackerError::NewtonStalled { .. }
                | PackerError::Body(_),
            ) => {
                diagnostics.rejected_steps += 1;
                dt *= 0.5;
                if dt < nominal / 64.0 {
                    break;
                }
            }
            Err(e) => return Err(e),
        }
    }
    if t == 0.0 {
        return Err(PackerError::StepUnderflow {
            s: 0.0,
            reason: "no flow step could be taken".into(),
        });
    }
    finish(state, t, diagnostics)
}

fn rk4_step(
    system: &ContactSystem,
    state: &State,
    a: &DVector<f64>,
    h: f64,
    t: f64,
    cfg: &ContinuationConfig,
) -> Result<(State, StepRecord), PackerError> {
    let free = system.free;
    let (k1, condition) = velocity(system, state, a)?;
    let (k2, _) = velocity(system, &state.shifted(free, &k1, h / 2.0), a)?;
    let (k3, _) = velocity(system, &state.shifted(free, &k2, h / 2.0), a)?;
    let (k4, _) = velocity(system, &state.shifted(free, &k3, h), a)?;
    let delta = (k1 + k2 * 2.0 + k3 * 2.0 + k4) / 6.0;
    let predicted = state.shifted(free, &delta, h);
    let target: Vec<f64> = a.iter().map(|x| x * (t + h)).collect();
    let projection = ContactSystem {
        target: Some(&target),
        ..*system
    };
    let outcome = projection.solve(predicted, cfg)?;
    Ok((
        outcome.state,
        StepRecord {
            s: t + h,
            newton_iterations: outcome.iterations,
            condition,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{ConvexBody, Vec2};
    use crate::packer::body_pack;
    use crate::sparsity::Triangulation;

    fn exp_k4() -> (Packing, PinnedTriangle) {
        let tri = Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2])).unwrap();
        let pins = PinnedTriangle::standard(tri.outer);
        let dirs = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.3, 1.0),
            Vec2::new(-0.8, 0.6),
        ];
        let body = ConvexBody::exp_family(dirs, 3.0).unwrap();
        (
            body_pack(&body, &tri, &pins, &Default::default())
                .unwrap()
                .packing,
            pins,
        )
    }

    #[test]
    fn keeping_every_edge_is_the_identity() {
        let (packing, pins) = exp_k4();
        let out = subgraph_flow(
            &packing,
            &pins,
            &packing.graph,
            0.01,
            10,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(out.packing.p, packing.p);
        assert_eq!(out.packing.r, packing.r);
        assert_eq!(out.t_reached, 0.0);
    }

    #[test]
    fn removing_one_edge_opens_a_gap() {
        let (packing, pins) = exp_k4();
        let removed = 5;
        let (u, v) = packing.graph.edge(removed);
        let keep: Vec<usize> = (0..6).filter(|e| *e != removed).collect();
        let sub = packing.graph.edge_subgraph(&keep);
        let out = subgraph_flow(&packing, &pins, &sub, 0.01, 20, &Default::default()).unwrap();
        assert!(out.packing.gap(u, v).unwrap() > 0.0);
        assert!(out.diagnostics.contact_residual <= 1e-9);
        assert_eq!(
            out.packing.recomputed_contact_graph(1e-9).unwrap().edges(),
            sub.edges()
        );
        for (k, w) in pins.vertices.iter().enumerate() {
            assert_eq!(out.packing.p[*w], pins.positions[k]);
        }
    }
}
