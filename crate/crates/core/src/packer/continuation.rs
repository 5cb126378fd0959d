//! Re-solving an independent packing after a change of body or radii.

use nalgebra::{DMatrix, DVector};

use super::homotopy::min_nonedge_gap;
use super::newton::{ContactSystem, State};
use super::{ContinuationConfig, Diagnostics, PackerError, Solved, StepRecord};
use crate::body::ConvexBody;
use crate::rigidity::{
    assemble_packing_matrix, independence_report, Packing, TolerancePolicy, FEASIBILITY_TOLERANCE,
};

/// Relative residual below which a column counts as dependent on the
/// columns already selected.
const COLUMN_TOLERANCE: f64 = 1e-9;

/// Up to `rank` linearly independent columns of `matrix`, chosen greedily
/// by largest residual norm (Gram–Schmidt with column pivoting). Columns
/// whose residual falls below `1e-9` times the largest column norm are
/// never chosen. The result is in selection order.
pub fn independent_columns(matrix: &DMatrix<f64>) -> Vec<usize> {
    let scale = matrix.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut residual: Vec<DVector<f64>> = matrix.column_iter().map(|c| c.into_owned()).collect();
    let mut chosen = Vec::new();
    while chosen.len() < matrix.nrows() {
        let best = (0..matrix.ncols())
            .filter(|j| !chosen.contains(j))
            .map(|j| (j, residual[j].norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        let Some((j, norm)) = best else { break };
        if !(norm > COLUMN_TOLERANCE * scale) {
            break;
        }
        let q = &residual[j] / norm;
        for (k, col) in residual.iter_mut().enumerate() {
            if k != j {
                let proj = q.dot(col);
                col.axpy(-proj, &q, 1.0);
            }
        }
        chosen.push(j);
    }
    chosen
}

fn finish(
    packing: &Packing,
    body: &ConvexBody,
    state: State,
    iterations: usize,
    condition: f64,
) -> Result<Solved, PackerError> {
    let gap = min_nonedge_gap(body, &packing.graph, &state)?;
    if !(gap > 0.0) {
        return Err(PackerError::Infeasible(format!(
            "a non-contact pair overlaps (gap {gap:e})"
        )));
    }
    let out = Packing::new(
        packing.graph.clone(),
        std::sync::Arc::new(body.clone()),
        state.p,
        state.r,
    )?;
    let f = out
        .check_feasible(FEASIBILITY_TOLERANCE)
        .map_err(|e| PackerError::Infeasible(e.to_string()))?;
    Ok(Solved {
        packing: out,
        diagnostics: Diagnostics {
            steps: vec![StepRecord {
                s: 1.0,
                newton_iterations: iterations,
                condition,
            }],
            rejected_steps: 0,
            newton_iterations: iterations,
            contact_residual: f.max_edge_residual,
            min_nonedge_gap: f.min_nonedge_gap,
        },
    })
}

fn require_independent(packing: &Packing) -> Result<(), PackerError> {
    let report = independence_report(packing, TolerancePolicy::Default)?;
    if report.independent {
        Ok(())
    } else {
        Err(PackerError::Dependent {
            rank: report.rank,
            edges: report.edges,
        })
    }
}

/// Packing of `new_body` with the same contact graph, near `packing`.
/// Selects `|E|` independent columns of the packing matrix, keeps the
/// other coordinates at their current values and solves the contact
/// equations of `new_body` in the selected ones.
pub fn continue_packing(
    packing: &Packing,
    new_body: &ConvexBody,
    cfg: &ContinuationConfig,
) -> Result<Solved, PackerError> {
    cfg.validate()?;
    require_independent(packing)?;
    let matrix = assemble_packing_matrix(packing)?.matrix;
    let free = independent_columns(&matrix);
    if free.len() < packing.edge_count() {
        return Err(PackerError::Dependent {
            rank: free.len(),
            edges: packing.edge_count(),
        });
    }
    let system = ContactSystem {
        body: new_body,
        graph: &packing.graph,
        free: &free,
        target: None,
        rank_cut: None,
    };
    let start = State {
        p: packing.p.clone(),
        r: packing.r.clone(),
    };
    let outcome = system.solve(start, cfg)?;
    finish(
        packing,
        new_body,
        outcome.state,
        outcome.iterations,
        outcome.condition,
    )
}

/// Relative cutoff of the pseudo-inverse used by [`resolve_with_radii`].
const RESOLVE_RANK_CUT: f64 = 1e-10;

/// Packing with the same body and contact graph whose radii are `radii`,
/// near `packing`. The radii move along the straight line from the old
/// ones with the usual step control, and at each step every centre
/// coordinate is free. The contact equations are solved by Gauss–Newton
/// with a truncated pseudo-inverse, so a dependent rigidity matrix is not
/// refused up front. When the graph cannot be held with these radii the
/// step underflows and the error gives the last reason. Independence of
/// the result is left to the caller.
pub fn resolve_with_radii(
    packing: &Packing,
    radii: &[f64],
    cfg: &ContinuationConfig,
) -> Result<Solved, PackerError> {
    cfg.validate()?;
    let n = packing.vertex_count();
    if radii.len() != n || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(PackerError::Config(format!(
            "{} radii for {n} vertices, all must be positive",
            radii.len()
        )));
    }
    let free: Vec<usize> = (0..2 * n).collect();
    let system = ContactSystem {
        body: &packing.body,
        graph: &packing.graph,
        free: &free,
        target: None,
        rank_cut: Some(RESOLVE_RANK_CUT),
    };
    let body = packing.body.as_ref();
    let mut state = State {
        p: packing.p.clone(),
        r: packing.r.clone(),
    };
    let mut iterations = 0;
    let mut condition = f64::NAN;
    let mut s = 0.0;
    let mut ds: f64 = 1.0;
    while s < 1.0 {
        let next = (s + ds).min(1.0);
        let mut guess = state.clone();
        for (v, r) in guess.r.iter_mut().enumerate() {
            *r = packing.r[v] + next * (radii[v] - packing.r[v]);
        }
        let reason = match system.solve(guess, cfg) {
            Ok(outcome) => {
                let gap = min_nonedge_gap(body, &packing.graph, &outcome.state)?;
                if gap > 0.0 {
                    iterations += outcome.iterations;
                    condition = outcome.condition;
                    state = outcome.state;
                    s = next;
                    ds = (ds * 1.5).min(1.0);
                    continue;
                }
                PackerError::Infeasible(format!("a non-contact pair overlaps (gap {gap:e})"))
            }
            Err(
                e @ (PackerError::NewtonStalled { .. }
                | PackerError::Singular { .. }
                | PackerError::Body(_)),
            ) => e,
            Err(e) => return Err(e),
        };
        ds *= 0.5;
        if ds < cfg.min_step {
            return Err(PackerError::StepUnderflow {
                s,
                reason: reason.to_string(),
            });
        }
    }
    state.r = radii.to_vec();
    finish(packing, body, state, iterations, condition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::Vec2;
    use crate::packer::{body_pack, PinnedTriangle};
    use crate::sparsity::{ContactGraph, Triangulation};

    fn dirs() -> Vec<Vec2> {
        vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.3, 1.0),
            Vec2::new(-0.8, 0.6),
        ]
    }

    fn exp_k4(w: f64) -> Packing {
        let tri = Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2])).unwrap();
        let pins = PinnedTriangle::standard(tri.outer);
        let body = ConvexBody::exp_family(dirs(), w).unwrap();
        body_pack(&body, &tri, &pins, &Default::default())
            .unwrap()
            .packing
    }

    #[test]
    fn column_selection_finds_the_rank() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(independent_columns(&m).len(), 1);
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(independent_columns(&m).len(), 2);
    }

    #[test]
    fn same_body_needs_no_steps() {
        let packing = exp_k4(3.0);
        let solved = continue_packing(&packing, &packing.body, &Default::default()).unwrap();
        assert_eq!(solved.diagnostics.newton_iterations, 0);
        assert_eq!(solved.packing.p, packing.p);
    }

    #[test]
    fn small_weight_change_converges_quickly() {
        let packing = exp_k4(3.0);
        let body = ConvexBody::exp_family(dirs(), 3.0 + 1e-3).unwrap();
        let solved = continue_packing(&packing, &body, &Default::default()).unwrap();
        assert!(solved.diagnostics.newton_iterations <= 10);
        assert!(solved.diagnostics.contact_residual <= 1e-9);
        assert_eq!(solved.packing.graph.edges(), packing.graph.edges());
    }

    #[test]
    fn dependent_packings_are_refused() {
        let tri = Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2])).unwrap();
        let disc = body_pack(
            &ConvexBody::disc(),
            &tri,
            &PinnedTriangle::standard([0, 1, 2]),
            &Default::default(),
        )
        .unwrap()
        .packing;
        assert!(matches!(
            continue_packing(&disc, &ConvexBody::disc(), &Default::default()),
            Err(PackerError::Dependent { rank: 5, edges: 6 })
        ));
    }

    #[test]
    fn resolving_with_the_same_radii_is_the_identity() {
        let packing = exp_k4(3.0);
        let solved = resolve_with_radii(&packing, &packing.r, &Default::default()).unwrap();
        assert_eq!(solved.diagnostics.newton_iterations, 0);
        assert_eq!(solved.packing.p, packing.p);
    }

    #[test]
    fn resolving_a_tree_with_new_radii_moves_centres() {
        let tri = Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2])).unwrap();
        let packing = body_pack(
            &ConvexBody::pnorm(3.0).unwrap(),
            &tri,
            &PinnedTriangle::standard([0, 1, 2]),
            &Default::default(),
        )
        .unwrap()
        .packing;
        let star = packing.graph.edge_subgraph(&[0, 1, 2]);
        let tree = Packing::new(
            star,
            packing.body.clone(),
            packing.p.clone(),
            packing.r.clone(),
        )
        .unwrap();
        let radii: Vec<f64> = tree.r.iter().map(|r| r * 0.9).collect();
        let solved = resolve_with_radii(&tree, &radii, &Default::default()).unwrap();
        assert_eq!(solved.packing.r, radii);
        assert!(solved.diagnostics.contact_residual <= 1e-9);
    }
}
