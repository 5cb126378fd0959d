//! Continuation of a circle packing onto another smooth strictly convex
//! body along the straight line between their gauges.

use std::sync::Arc;

use super::circle::circle_pack;
use super::newton::{unpinned_columns, ContactSystem, NewtonOutcome, State};
use super::{ContinuationConfig, Diagnostics, PackerError, PinnedTriangle, Solved, StepRecord};
use crate::body::{BodyKind, ConvexBody, RadialProfile};
use crate::rigidity::{Packing, FEASIBILITY_TOLERANCE};
use crate::sparsity::{ContactGraph, Triangulation};

/// The body with gauge `(1 − s)|x| + s‖x‖_body`, or `None` when its
/// profile has a point of non-positive curvature.
fn intermediate_body(target: &Arc<ConvexBody>, s: f64) -> Result<Option<ConvexBody>, PackerError> {
    if s >= 1.0 {
        return Ok(Some(target.as_ref().clone()));
    }
    let profile = RadialProfile::gauge_blend(target.clone(), s)?;
    let (min, _) = profile.min_curvature()?;
    if min > 0.0 {
        Ok(Some(ConvexBody::from_profile_unchecked(profile, true)))
    } else {
        Ok(None)
    }
}

/// Smallest gauge gap over non-adjacent pairs of a configuration.
pub(crate) fn min_nonedge_gap(
    body: &ConvexBody,
    graph: &ContactGraph,
    state: &State,
) -> Result<f64, PackerError> {
    let n = state.p.len();
    let mut min = f64::INFINITY;
    for u in 0..n {
        for v in u + 1..n {
            if graph.has_edge(u, v) {
                continue;
            }
            let d = body.norm(&(state.p[u] - state.p[v]))?;
            min = min.min(d - state.r[u] - state.r[v]);
        }
    }
    Ok(min)
}

/// Outcome of one attempted step, with the reason for a rejection.
enum Attempt {
    Accepted(NewtonOutcome),
    Rejected(String),
}

fn attempt(
    body: &ConvexBody,
    graph: &ContactGraph,
    free: &[usize],
    start: State,
    cfg: &ContinuationConfig,
) -> Result<Attempt, PackerError> {
    let system = ContactSystem {
        body,
        graph,
        free,
        target: None,
        rank_cut: None,
    };
    let outcome = match system.solve(start, cfg) {
        Ok(outcome) => outcome,
        Err(e @ (PackerError::NewtonStalled { .. } | PackerError::Singular { .. })) => {
            return Ok(Attempt::Rejected(e.to_string()))
        }
        Err(PackerError::Body(e)) => return Ok(Attempt::Rejected(e.to_string())),
        Err(e) => return Err(e),
    };
    let gap = min_nonedge_gap(body, graph, &outcome.state)?;
    if !(gap > 0.0) {
        return Ok(Attempt::Rejected(format!("non-edge gap {gap:e}")));
    }
    Ok(Attempt::Accepted(outcome))
}

/// Packing of `body` with contact graph `tri` and the outer vertices held
/// at the pins. Starts from the circle packing and follows the gauges
/// `(1 − s)|x| + s‖x‖_body`, solving the `3|V| − 6` unpinned contact
/// equations by Newton at each accepted `s`. Every intermediate profile is
/// checked for positive curvature and the step is halved on failure.
pub fn body_pack(
    body: &ConvexBody,
    tri: &Triangulation,
    pins: &PinnedTriangle,
    cfg: &ContinuationConfig,
) -> Result<Solved, PackerError> {
    cfg.validate()?;
    if !body.is_regular() {
        return Err(PackerError::NotRegular);
    }
    let start = circle_pack(tri, pins)?;
    if matches!(body.kind(), BodyKind::Disc) {
        return Ok(start);
    }
    let target = Arc::new(body.clone());
    let graph = &tri.graph;
    let free = unpinned_columns(tri.vertex_count(), &pins.vertices);
    let mut diagnostics = Diagnostics {
        newton_iterations: start.diagnostics.newton_iterations,
        ..Default::default()
    };
    let mut state = State {
        p: start.packing.p.clone(),
        r: start.packing.r.clone(),
    };
    // Previous accepted point, for a secant predictor.
    let mut previous: Option<(f64, State)> = None;
    let mut s = 0.0;
    let mut ds = cfg.initial_step;
    while s < 1.0 {
        let next = (s + ds).min(1.0);
        let rejection = match intermediate_body(&target, next)? {
            None => Some(format!("profile curvature is not positive at s = {next}")),
            Some(stage) => {
                let guess = match &previous {
                    Some((s0, x0)) => extrapolate(x0, *s0, &state, s, next),
                    None => state.clone(),
                };
                let outcome = match attempt(&stage, graph, &free, guess, cfg)? {
                    Attempt::Rejected(reason) if previous.is_some() => {
                        attempt(&stage, graph, &free, state.clone(), cfg)?.or(reason)
                    }
                    other => other,
                };
                match outcome {
                    Attempt::Accepted(outcome) => {
                        diagnostics.newton_iterations += outcome.iterations;
                        diagnostics.steps.push(StepRecord {
                            s: next,
                            newton_iterations: outcome.iterations,
                            condition: outcome.condition,
                        });
                        previous = Some((s, std::mem::replace(&mut state, outcome.state)));
                        s = next;
                        ds = (ds * 1.5).min(1.0);
                        None
                    }
                    Attempt::Rejected(reason) => Some(reason),
                }
            }
        };
        if let Some(reason) = rejection {
            diagnostics.rejected_steps += 1;
            ds *= 0.5;
            if ds < cfg.min_step {
                return Err(PackerError::StepUnderflow { s, reason });
            }
        }
    }
    let packing = Packing::new(graph.clone(), target, state.p, state.r)?;
    let f = packing
        .check_feasible(FEASIBILITY_TOLERANCE)
        .map_err(|e| PackerError::Infeasible(e.to_string()))?;
    diagnostics.contact_residual = f.max_edge_residual;
    diagnostics.min_nonedge_gap = f.min_nonedge_gap;
    Ok(Solved {
        packing,
        diagnostics,
    })
}

impl Attempt {
    /// Keeps the first rejection reason when a retry also fails.
    fn or(self, reason: String) -> Attempt {
        match self {
            Attempt::Rejected(_) => Attempt::Rejected(reason),
            accepted => accepted,
        }
    }
}

/// Linear extrapolation through `(s0, x0)` and `(s1, x1)` to `s`.
fn extrapolate(x0: &State, s0: f64, x1: &State, s1: f64, s: f64) -> State {
    let t = (s - s1) / (s1 - s0);
    let mut out = x1.clone();
    for (k, q) in out.p.iter_mut().enumerate() {
        *q += (x1.p[k] - x0.p[k]) * t;
    }
    for (k, r) in out.r.iter_mut().enumerate() {
        *r += (x1.r[k] - x0.r[k]) * t;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::Vec2;
    use crate::rigidity::independence_test;
    use crate::sparsity::random_triangulation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k4() -> Triangulation {
        Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2])).unwrap()
    }

    fn exp_body() -> ConvexBody {
        let dirs = vec![
            Vec2::new(1.0, 0.0),
            Vec2::new(0.3, 1.0),
            Vec2::new(-0.8, 0.6),
        ];
        ConvexBody::exp_family(dirs, 3.0).unwrap()
    }

    #[test]
    fn disc_target_returns_the_circle_packing() {
        let tri = k4();
        let pins = PinnedTriangle::standard(tri.outer);
        let a = body_pack(&ConvexBody::disc(), &tri, &pins, &Default::default()).unwrap();
        let b = circle_pack(&tri, &pins).unwrap();
        assert_eq!(a.packing.p, b.packing.p);
        assert_eq!(a.packing.r, b.packing.r);
    }

    #[test]
    fn exp_family_k4_is_independent() {
        let tri = k4();
        let pins = PinnedTriangle::standard(tri.outer);
        let solved = body_pack(&exp_body(), &tri, &pins, &Default::default()).unwrap();
        assert!(solved.diagnostics.contact_residual <= 1e-9);
        assert!(solved.diagnostics.max_condition().is_finite());
        assert!(independence_test(&solved.packing).unwrap());
        for (k, v) in pins.vertices.iter().enumerate() {
            assert_eq!(solved.packing.p[*v], pins.positions[k]);
        }
    }

    #[test]
    fn pnorm_packings_of_random_triangulations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, p) in [(6, 1.5), (9, 3.0), (12, 4.0)] {
            let tri = random_triangulation(n, &mut rng).unwrap();
            let pins = PinnedTriangle::standard(tri.outer);
            let body = ConvexBody::pnorm(p).unwrap();
            let solved = body_pack(&body, &tri, &pins, &Default::default()).unwrap();
            assert!(
                solved.diagnostics.contact_residual <= 1e-9,
                "n = {n}, p = {p}"
            );
            assert!(solved.diagnostics.min_nonedge_gap > 0.0);
            assert!(!solved.packing.has_crossing_segments());
            assert!(solved.packing.p.iter().all(|x| pins.contains(x)));
        }
    }

    #[test]
    fn reruns_are_identical() {
        let tri = k4();
        let pins = PinnedTriangle::standard(tri.outer);
        let a = body_pack(&exp_body(), &tri, &pins, &Default::default()).unwrap();
        let b = body_pack(&exp_body(), &tri, &pins, &Default::default()).unwrap();
        assert_eq!(a.packing.p, b.packing.p);
        assert_eq!(a.packing.r, b.packing.r);
    }
}
