//! Circle packings of triangulations and Möbius general position.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Complex, Matrix2};
use rand::Rng;

use super::newton::{unpinned_columns, ContactSystem, State};
use super::{ContinuationConfig, PackerError, PinnedTriangle, Solved};
use crate::body::{BodyKind, ConvexBody, Vec2};
use crate::rigidity::{Packing, FEASIBILITY_TOLERANCE};
use crate::sparsity::Triangulation;

/// Threshold of the general edge condition on normalized determinants.
pub const GENERAL_EDGE_TOLERANCE: f64 = 1e-7;

const ANGLE_SUM_TOLERANCE: f64 = 1e-10;
const MAX_SWEEPS: usize = 200_000;
const MOBIUS_ATTEMPTS: usize = 100;

/// Outer radii of mutually touching bodies centred at the pins, measured
/// in the body's gauge.
pub(crate) fn outer_radii(
    body: &ConvexBody,
    pins: &PinnedTriangle,
) -> Result<[f64; 3], PackerError> {
    let [a, b, c] = pins.positions;
    let dab = body.norm(&(a - b))?;
    let dbc = body.norm(&(b - c))?;
    let dca = body.norm(&(c - a))?;
    let r = [
        (dab + dca - dbc) / 2.0,
        (dab + dbc - dca) / 2.0,
        (dbc + dca - dab) / 2.0,
    ];
    if r.iter().any(|x| !(*x > 0.0)) {
        return Err(PackerError::Pins(format!(
            "pins give non-positive outer radii {r:?}"
        )));
    }
    Ok(r)
}

/// Angle at the vertex of radius `x` in the triangle of mutually tangent
/// circles of radii `x`, `y`, `z`.
fn corner_angle(x: f64, y: f64, z: f64) -> f64 {
    let (a, b, c) = (x + y, x + z, y + z);
    ((a * a + b * b - c * c) / (2.0 * a * b))
        .clamp(-1.0, 1.0)
        .acos()
}

/// Interior radii with angle sum `2π`, by the uniform-neighbour iteration.
fn solve_radii(tri: &Triangulation, outer: [f64; 3]) -> Result<Vec<f64>, PackerError> {
    let n = tri.vertex_count();
    let mut faces_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for f in &tri.faces {
        for i in 0..3 {
            faces_at[f[i]].push((f[(i + 1) % 3], f[(i + 2) % 3]));
        }
    }
    let mut r = vec![1.0; n];
    for (k, &v) in tri.outer.iter().enumerate() {
        r[v] = outer[k];
    }
    let interior: Vec<usize> = (0..n).filter(|v| !tri.is_outer(*v)).collect();
    let mut error = f64::INFINITY;
    for sweep in 0..MAX_SWEEPS {
        error = 0.0;
        for &v in &interior {
            let k = faces_at[v].len() as f64;
            let sum: f64 = faces_at[v]
                .iter()
                .map(|&(a, b)| corner_angle(r[v], r[a], r[b]))
                .sum();
            error = f64::max(error, (sum - 2.0 * PI).abs());
            let beta = (sum / (2.0 * k)).sin();
            let delta = (PI / k).sin();
            let uniform = beta * r[v] / (1.0 - beta);
            r[v] = uniform * (1.0 - delta) / delta;
        }
        if error <= ANGLE_SUM_TOLERANCE {
            return Ok(r);
        }
        if sweep + 1 == MAX_SWEEPS {
            break;
        }
    }
    Err(PackerError::CirclePacking {
        error,
        sweeps: MAX_SWEEPS,
    })
}

/// Third centre `x` left of `a → b` with `|x − a| = da`, `|x − b| = db`.
fn third_point(a: Vec2, b: Vec2, da: f64, db: f64) -> Vec2 {
    let d = b - a;
    let c = d.norm();
    let cos = ((da * da + c * c - db * db) / (2.0 * da * c)).clamp(-1.0, 1.0);
    let sin = (1.0 - cos * cos).sqrt();
    let u = d / c;
    a + Vec2::new(u.x * cos - u.y * sin, u.x * sin + u.y * cos) * da
}

/// Centres in a free frame, laid out face by face from the first face.
fn layout(tri: &Triangulation, r: &[f64]) -> Vec<Vec2> {
    let n = tri.vertex_count();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, f) in tri.faces.iter().enumerate() {
        for k in 0..3 {
            owner.insert((f[k], f[(k + 1) % 3]), i);
        }
    }
    let mut p: Vec<Option<Vec2>> = vec![None; n];
    let [a, b, c] = tri.faces[0];
    p[a] = Some(Vec2::zeros());
    p[b] = Some(Vec2::new(r[a] + r[b], 0.0));
    p[c] = Some(third_point(
        p[a].unwrap(),
        p[b].unwrap(),
        r[a] + r[c],
        r[b] + r[c],
    ));
    let mut done = vec![false; tri.faces.len()];
    done[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let f = tri.faces[i];
        for k in 0..3 {
            let (u, v) = (f[k], f[(k + 1) % 3]);
            let Some(&j) = owner.get(&(v, u)) else {
                continue;
            };
            if done[j] {
                continue;
            }
            done[j] = true;
            let g = tri.faces[j];
            let x = g
                .iter()
                .copied()
                .find(|&w| w != u && w != v)
                .expect("triangle");
            if p[x].is_none() {
                // Face j is (v, u, x) counter-clockwise, so x lies left of v → u.
                p[x] = Some(third_point(
                    p[v].unwrap(),
                    p[u].unwrap(),
                    r[v] + r[x],
                    r[u] + r[x],
                ));
            }
            queue.push_back(j);
        }
    }
    p.into_iter()
        .map(|x| x.expect("every vertex lies on an inner face"))
        .collect()
}

/// Similarity (possibly orientation reversing) taking the free-frame outer
/// centres onto the pins.
fn fit_to_pins(
    p: &mut [Vec2],
    tri: &Triangulation,
    pins: &PinnedTriangle,
) -> Result<(), PackerError> {
    let index = |v: usize| pins.vertices.iter().position(|&w| w == v);
    let order: Vec<usize> = tri
        .outer
        .iter()
        .map(|&v| {
            index(v).ok_or_else(|| {
                PackerError::Pins(format!("vertex {v} of the outer face is not pinned"))
            })
        })
        .collect::<Result<_, _>>()?;
    let target = |k: usize| pins.positions[order[k]];
    let [qa, qb, qc] = [p[tri.outer[0]], p[tri.outer[1]], p[tri.outer[2]]];
    let free_orient = (qb - qa).x * (qc - qa).y - (qb - qa).y * (qc - qa).x;
    let (ta, tb, tc) = (target(0), target(1), target(2));
    let pin_orient = (tb - ta).x * (tc - ta).y - (tb - ta).y * (tc - ta).x;
    let flip = if free_orient * pin_orient < 0.0 {
        Matrix2::new(1.0, 0.0, 0.0, -1.0)
    } else {
        Matrix2::identity()
    };
    let (fa, fb) = (flip * qa, flip * qb);
    let from = fb - fa;
    let to = tb - ta;
    let angle = to.y.atan2(to.x) - from.y.atan2(from.x);
    let (s, c) = angle.sin_cos();
    let rot = Matrix2::new(c, -s, s, c) * flip;
    for x in p.iter_mut() {
        *x = rot * (*x - qa) + ta;
    }
    for (k, &v) in tri.outer.iter().enumerate() {
        p[v] = target(k);
    }
    Ok(())
}

/// Disc packing of a triangulation with the outer face centred at the pins.
pub fn circle_pack(tri: &Triangulation, pins: &PinnedTriangle) -> Result<Solved, PackerError> {
    tri.validate()?;
    pins.check_against(&tri.graph)?;
    let mut want = pins.vertices;
    let mut have = tri.outer;
    want.sort_unstable();
    have.sort_unstable();
    if want != have {
        return Err(PackerError::Pins(format!(
            "pins {:?} are not the outer face {:?}",
            pins.vertices, tri.outer
        )));
    }
    let disc = ConvexBody::disc();
    let pinned_r = outer_radii(&disc, pins)?;
    let outer: [f64; 3] = std::array::from_fn(|k| {
        let i = pins
            .vertices
            .iter()
            .position(|&w| w == tri.outer[k])
            .unwrap();
        pinned_r[i]
    });
    let r = solve_radii(tri, outer)?;
    let mut p = layout(tri, &r);
    fit_to_pins(&mut p, tri, pins)?;

    let cfg = ContinuationConfig::default();
    let free = unpinned_columns(tri.vertex_count(), &pins.vertices);
    let system = ContactSystem {
        body: &disc,
        graph: &tri.graph,
        free: &free,
        target: None,
        rank_cut: None,
    };
    let polished = system.solve(State { p, r }, &cfg)?;
    let packing = Packing::new(
        tri.graph.clone(),
        Arc::new(disc),
        polished.state.p,
        polished.state.r,
    )?;
    let f = packing
        .check_feasible(FEASIBILITY_TOLERANCE)
        .map_err(|e| PackerError::Infeasible(e.to_string()))?;
    Ok(Solved {
        packing,
        diagnostics: super::Diagnostics {
            steps: vec![super::StepRecord {
                s: 0.0,
                newton_iterations: polished.iterations,
                condition: polished.condition,
            }],
            rejected_steps: 0,
            newton_iterations: polished.iterations,
            contact_residual: f.max_edge_residual,
            min_nonedge_gap: f.min_nonedge_gap,
        },
    })
}

/// Smallest `|det[e_i, e_j]| / (|e_i| |e_j|)` over pairs of edge vectors.
pub fn edge_parallelism(packing: &Packing) -> f64 {
    let vectors: Vec<Vec2> = packing
        .graph
        .edges()
        .iter()
        .map(|&(u, v)| packing.p[u] - packing.p[v])
        .collect();
    let mut min = f64::INFINITY;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            let (a, b) = (vectors[i], vectors[j]);
            min = min.min((a.x * b.y - a.y * b.x).abs() / (a.norm() * b.norm()));
        }
    }
    min
}

/// Edge vectors are pairwise linearly independent.
pub fn general_edge_condition(packing: &Packing) -> bool {
    edge_parallelism(packing) > GENERAL_EDGE_TOLERANCE
}

/// Applies random Möbius maps `z ↦ 1/(z − z₀)`, with `z₀` outside every
/// disc, until the image packing satisfies the general edge condition.
/// The image is rescaled to keep the original mean radius.
pub fn mobius_general_position<R: Rng + ?Sized>(
    packing: &Packing,
    rng: &mut R,
) -> Result<Packing, PackerError> {
    if !matches!(packing.body.kind(), BodyKind::Disc) {
        return Err(PackerError::Config(
            "Möbius maps act on disc packings only".into(),
        ));
    }
    let n = packing.vertex_count();
    let centroid = packing.p.iter().fold(Vec2::zeros(), |s, x| s + x) / n as f64;
    let extent = packing
        .p
        .iter()
        .zip(&packing.r)
        .map(|(x, r)| (x - centroid).norm() + r)
        .fold(0.0, f64::max);
    let mean_r = packing.r.iter().sum::<f64>() / n as f64;
    for _ in 0..MOBIUS_ATTEMPTS {
        let angle = rng.gen_range(0.0..2.0 * PI);
        let dist = extent * rng.gen_range(1.2..3.0);
        let z0 = Complex::new(
            centroid.x + dist * angle.cos(),
            centroid.y + dist * angle.sin(),
        );
        let mut p = Vec::with_capacity(n);
        let mut r = Vec::with_capacity(n);
        for (x, &radius) in packing.p.iter().zip(&packing.r) {
            let d = Complex::new(x.x, x.y) - z0;
            let denom = d.norm_sqr() - radius * radius;
            let c = d.conj() / denom;
            p.push(Vec2::new(c.re, c.im));
            r.push(radius / denom);
        }
        let scale = mean_r / (r.iter().sum::<f64>() / n as f64);
        let candidate = Packing::new(
            packing.graph.clone(),
            packing.body.clone(),
            p.iter().map(|x| x * scale).collect(),
            r.iter().map(|x| x * scale).collect(),
        )?;
        if general_edge_condition(&candidate)
            && candidate.check_feasible(FEASIBILITY_TOLERANCE).is_ok()
        {
            return Ok(candidate);
        }
    }
    Err(PackerError::RetriesExhausted(MOBIUS_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity::{random_triangulation, ContactGraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k4() -> Triangulation {
        Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2])).unwrap()
    }

    #[test]
    fn descartes_inner_radius() {
        let tri = k4();
        let pins = PinnedTriangle::standard(tri.outer);
        let solved = circle_pack(&tri, &pins).unwrap();
        let inner = (0..4).find(|v| !tri.is_outer(*v)).unwrap();
        let expected = 1.0 / (3.0 + 2.0 * 3f64.sqrt());
        assert!((solved.packing.r[inner] - expected).abs() < 1e-12);
        for v in tri.outer {
            assert!((solved.packing.r[v] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn random_triangulations_pack_with_their_contact_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [5, 8, 12, 20] {
            let tri = random_triangulation(n, &mut rng).unwrap();
            let solved = circle_pack(&tri, &PinnedTriangle::standard(tri.outer)).unwrap();
            assert!(solved.diagnostics.contact_residual <= 1e-9);
            let g = solved.packing.recomputed_contact_graph(1e-8).unwrap();
            assert_eq!(g.edge_count(), tri.graph.edge_count());
            assert!(g.edges().iter().all(|&(u, v)| tri.graph.has_edge(u, v)));
        }
    }

    #[test]
    fn clockwise_pins_are_honoured() {
        let tri = k4();
        let s = PinnedTriangle::standard(tri.outer);
        let pins = PinnedTriangle::new(
            [s.vertices[0], s.vertices[2], s.vertices[1]],
            [s.positions[0], s.positions[2], s.positions[1]],
        )
        .unwrap();
        let solved = circle_pack(&tri, &pins).unwrap();
        for (k, v) in pins.vertices.iter().enumerate() {
            assert_eq!(solved.packing.p[*v], pins.positions[k]);
        }
        assert!(solved.diagnostics.contact_residual <= 1e-12);
    }

    #[test]
    fn mobius_reaches_general_position() {
        let tri = k4();
        let solved = circle_pack(&tri, &PinnedTriangle::standard(tri.outer)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let moved = mobius_general_position(&solved.packing, &mut rng).unwrap();
        assert!(general_edge_condition(&moved));
        assert!(moved.check_feasible(1e-9).is_ok());
        assert_eq!(
            moved.recomputed_contact_graph(1e-9).unwrap().edge_count(),
            6
        );
    }

    #[test]
    fn parallel_edges_fail_the_condition() {
        let g = ContactGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        let p = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 3.0),
            Vec2::new(1.0, 3.0),
        ];
        let packing = Packing::new(g, Arc::new(ConvexBody::disc()), p, vec![0.5; 4]).unwrap();
        assert!(!general_edge_condition(&packing));
    }
}
