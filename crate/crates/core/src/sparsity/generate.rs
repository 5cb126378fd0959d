//! Random triangulations and random spanning subgraphs.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::planar::{is_planar, Embedding};
use super::{ContactGraph, GraphError, PebbleGame};

/// A maximal planar graph with a fixed embedding. Inner faces are listed
/// counter-clockwise; `outer` lists the outer triangle counter-clockwise as
/// seen from inside.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub graph: ContactGraph,
    pub faces: Vec<[usize; 3]>,
    pub outer: [usize; 3],
}

impl Triangulation {
    /// Builds a triangulation from an embedding whose faces are all
    /// triangles, taking the face walk `outer_walk` (as returned by
    /// [`Embedding::faces`]) as the outer face.
    pub fn from_embedding(
        graph: ContactGraph,
        embedding: &Embedding,
        outer_walk: usize,
    ) -> Result<Self, GraphError> {
        if !embedding.is_valid_for(&graph) {
            return Err(GraphError::Invalid(
                "embedding does not match the graph".into(),
            ));
        }
        let walks = embedding.faces();
        if walks.iter().any(|w| w.len() != 3) {
            return Err(GraphError::Invalid(
                "embedding has a non-triangular face".into(),
            ));
        }
        let o = &walks[outer_walk];
        let outer = [o[0], o[2], o[1]];
        let faces = walks
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != outer_walk)
            .map(|(_, w)| [w[0], w[1], w[2]])
            .collect();
        Ok(Self {
            graph,
            faces,
            outer,
        })
    }

    /// Builds a triangulation from a maximal planar graph, using the face
    /// through `outer` if given and the first face otherwise.
    pub fn from_graph(graph: ContactGraph, outer: Option<[usize; 3]>) -> Result<Self, GraphError> {
        if !graph.has_triangulation_edge_count() {
            return Err(GraphError::Invalid(format!(
                "{} edges on {} vertices is not a triangulation",
                graph.edge_count(),
                graph.vertex_count()
            )));
        }
        let embedding = is_planar(&graph).ok_or(GraphError::NotPlanar)?;
        let walks = embedding.faces();
        let index = match outer {
            None => 0,
            Some(tri) => {
                let mut want = tri;
                want.sort_unstable();
                walks
                    .iter()
                    .position(|w| {
                        let mut have = [w[0], w[1], w[2]];
                        have.sort_unstable();
                        w.len() == 3 && have == want
                    })
                    .ok_or_else(|| GraphError::Invalid(format!("{tri:?} is not a face")))?
            }
        };
        Self::from_embedding(graph, &embedding, index)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_outer(&self, v: usize) -> bool {
        self.outer.contains(&v)
    }

    /// Rotation system consistent with the stored face orientation.
    pub fn embedding(&self) -> Embedding {
        let n = self.vertex_count();
        let mut after: HashMap<(usize, usize), usize> = HashMap::new();
        let outer_walk = [self.outer[0], self.outer[2], self.outer[1]];
        for face in self.faces.iter().chain(std::iter::once(&outer_walk)) {
            for i in 0..3 {
                let (x, y, z) = (face[i], face[(i + 1) % 3], face[(i + 2) % 3]);
                after.insert((y, z), x);
            }
        }
        let rotation = (0..n)
            .map(|y| {
                let neighbors = self.graph.neighbors(y);
                if neighbors.is_empty() {
                    return Vec::new();
                }
                let start = neighbors[0];
                let mut order = vec![start];
                let mut z = after[&(y, start)];
                while z != start {
                    order.push(z);
                    z = after[&(y, z)];
                }
                order
            })
            .collect();
        Embedding::from_rotation(rotation)
    }

    /// Consistency of faces, edges and orientation.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if n < 3 || self.faces.len() != 2 * n - 5 || !self.graph.has_triangulation_edge_count() {
            return Err(GraphError::Invalid("face or edge count is wrong".into()));
        }
        let mut darts = HashSet::new();
        let outer_walk = [self.outer[0], self.outer[2], self.outer[1]];
        for face in self.faces.iter().chain(std::iter::once(&outer_walk)) {
            for i in 0..3 {
                let (u, v) = (face[i], face[(i + 1) % 3]);
                if !self.graph.has_edge(u, v) || !darts.insert((u, v)) {
                    return Err(GraphError::Invalid(format!(
                        "dart ({u}, {v}) is inconsistent"
                    )));
                }
            }
        }
        if darts.len() != 2 * self.graph.edge_count() {
            return Err(GraphError::Invalid(
                "faces do not cover every edge twice".into(),
            ));
        }
        if !self.embedding().is_valid_for(&self.graph) {
            return Err(GraphError::Invalid("faces do not form a sphere".into()));
        }
        Ok(())
    }
}

/// A random triangulation on `n ≥ 3` vertices with outer face `(0, 1, 2)`.
///
/// Vertices are inserted one at a time into uniformly chosen inner faces,
/// then random edge flips mix the result so that every triangulation with
/// that outer face can occur.
pub fn random_triangulation<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<Triangulation, GraphError> {
    if n < 3 {
        return Err(GraphError::Invalid(format!(
            "a triangulation needs 3 vertices, got {n}"
        )));
    }
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    for v in 3..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        faces[i] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
    }
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for f in &faces {
        for i in 0..3 {
            let (u, v) = (f[i], f[(i + 1) % 3]);
            edges.insert((u.min(v), u.max(v)));
        }
    }
    let flips = if n >= 5 { 4 * n } else { 0 };
    for _ in 0..flips {
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for k in 0..3 {
                owner.insert((f[k], f[(k + 1) % 3]), i);
            }
        }
        let i = rng.gen_range(0..faces.len());
        let k = rng.gen_range(0..3);
        let f = faces[i];
        let (u, v, x) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
        let Some(&j) = owner.get(&(v, u)) else {
            continue;
        };
        let g = faces[j];
        let y = g
            .iter()
            .copied()
            .find(|&w| w != u && w != v)
            .expect("triangle");
        if edges.contains(&(x.min(y), x.max(y))) {
            continue;
        }
        edges.remove(&(u.min(v), u.max(v)));
        edges.insert((x.min(y), x.max(y)));
        faces[i] = [u, y, x];
        faces[j] = [y, v, x];
    }
    let mut edge_list: Vec<(usize, usize)> = edges.into_iter().collect();
    edge_list.sort_unstable();
    let graph = ContactGraph::new(n, edge_list)?;
    let tri = Triangulation {
        graph,
        faces,
        outer: [0, 1, 2],
    };
    debug_assert!(tri.validate().is_ok());
    Ok(tri)
}

fn spanning_tree(graph: &ContactGraph, order: &[usize]) -> Result<Vec<usize>, GraphError> {
    let n = graph.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for &e in order {
        let (u, v) = graph.edge(e);
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            tree.push(e);
        }
    }
    if tree.len() + 1 != n {
        return Err(GraphError::Disconnected);
    }
    Ok(tree)
}

/// Edge indices of a random connected spanning subgraph of `graph` with
/// exactly `m` edges, sorted increasingly.
pub fn random_connected_subgraph<R: Rng + ?Sized>(
    graph: &ContactGraph,
    m: usize,
    rng: &mut R,
) -> Result<Vec<usize>, GraphError> {
    let n = graph.vertex_count();
    let min = n.saturating_sub(1);
    if m < min || m > graph.edge_count() {
        return Err(GraphError::EdgeCount {
            requested: m,
            min,
            max: graph.edge_count(),
        });
    }
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.shuffle(rng);
    let tree = spanning_tree(graph, &order)?;
    let in_tree: HashSet<usize> = tree.iter().copied().collect();
    let mut chosen = tree;
    chosen.extend(
        order
            .into_iter()
            .filter(|e| !in_tree.contains(e))
            .take(m - min),
    );
    chosen.sort_unstable();
    Ok(chosen)
}

/// Edge indices of a random connected spanning subgraph of `graph` that is
/// (2,k)-sparse, grown greedily from a random spanning tree until it has
/// `target` edges or no further edge keeps it sparse.
pub fn random_sparse_spanning_subgraph<R: Rng + ?Sized>(
    graph: &ContactGraph,
    k: usize,
    target: usize,
    rng: &mut R,
) -> Result<Vec<usize>, GraphError> {
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.shuffle(rng);
    let tree = spanning_tree(graph, &order)?;
    let mut game = PebbleGame::new(graph.vertex_count(), k);
    for &e in &tree {
        let (u, v) = graph.edge(e);
        game.insert(u, v)
            .map_err(|_| GraphError::Invalid("a spanning tree is always sparse".into()))?;
    }
    let in_tree: HashSet<usize> = tree.iter().copied().collect();
    let mut chosen = tree;
    for e in order {
        if chosen.len() >= target {
            break;
        }
        if in_tree.contains(&e) {
            continue;
        }
        let (u, v) = graph.edge(e);
        if game.insert(u, v).is_ok() {
            chosen.push(e);
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Adds edges to a planar graph until it is a triangulation. Returns the
/// triangulation, whose graph lists the original edges first with their
/// original indices, followed by the added chords.
pub fn triangulate_planar(graph: &ContactGraph) -> Result<Triangulation, GraphError> {
    let n = graph.vertex_count();
    if n < 3 {
        return Err(GraphError::Invalid(format!(
            "a triangulation needs 3 vertices, got {n}"
        )));
    }
    let mut embedding = is_planar(graph).ok_or(GraphError::NotPlanar)?;
    let mut edges: Vec<(usize, usize)> = graph.edges().to_vec();
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();

    // Join components through their first vertices; gluing two plane maps
    // at a corner keeps the union planar.
    let components = graph.components();
    for pair in components.windows(2) {
        let (a, b) = (pair[0][0], pair[1][0]);
        embedding.rotations_mut()[a].push(b);
        embedding.rotations_mut()[b].push(a);
        edges.push((a.min(b), a.max(b)));
        present.insert((a.min(b), a.max(b)));
    }

    loop {
        let faces = embedding.faces();
        let Some(walk) = faces.into_iter().find(|w| w.len() > 3) else {
            break;
        };
        let (i, j) = chord(&walk, &present)
            .ok_or_else(|| GraphError::Invalid(format!("no chord available in face {walk:?}")))?;
        let len = walk.len();
        let (wi, wj) = (walk[i], walk[j]);
        let insert = |rot: &mut Vec<usize>, before: usize, new: usize| {
            let pos = rot
                .iter()
                .position(|&x| x == before)
                .expect("corner neighbour");
            rot.insert(pos, new);
        };
        insert(
            &mut embedding.rotations_mut()[wi],
            walk[(i + len - 1) % len],
            wj,
        );
        insert(
            &mut embedding.rotations_mut()[wj],
            walk[(j + len - 1) % len],
            wi,
        );
        edges.push((wi.min(wj), wi.max(wj)));
        present.insert((wi.min(wj), wi.max(wj)));
    }
    let full = ContactGraph::new(n, edges)?;
    Triangulation::from_embedding(full, &embedding, 0)
}

/// Two corners of a face walk whose vertices are distinct and not yet
/// adjacent, preferring corners two steps apart.
fn chord(walk: &[usize], present: &HashSet<(usize, usize)>) -> Option<(usize, usize)> {
    let len = walk.len();
    let ok = |i: usize, j: usize| {
        let (a, b) = (walk[i], walk[j]);
        a != b && !present.contains(&(a.min(b), a.max(b)))
    };
    for step in 2..len - 1 {
        for i in 0..len {
            let j = (i + step) % len;
            if ok(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity::pebble_sparse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_triangulations_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..30 {
            let t = random_triangulation(n, &mut rng).unwrap();
            t.validate().unwrap();
            assert!(is_planar(&t.graph).is_some());
        }
    }

    #[test]
    fn flips_reach_non_stacked_triangulations() {
        // Stacked triangulations always have a degree-3 inner vertex; the
        // octahedron-like ones reached by flips need not.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen_min_degree_4 = false;
        for _ in 0..200 {
            let t = random_triangulation(8, &mut rng).unwrap();
            let inner_min = (3..8).map(|v| t.graph.degree(v)).min().unwrap();
            seen_min_degree_4 |= inner_min >= 4;
        }
        assert!(seen_min_degree_4);
    }

    #[test]
    fn subgraph_samplers_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = random_triangulation(12, &mut rng).unwrap();
        for m in [11, 15, 22, 30] {
            let keep = random_connected_subgraph(&t.graph, m, &mut rng).unwrap();
            assert_eq!(keep.len(), m);
            assert!(t.graph.edge_subgraph(&keep).is_connected());
        }
        assert!(random_connected_subgraph(&t.graph, 10, &mut rng).is_err());
        let keep = random_sparse_spanning_subgraph(&t.graph, 3, 21, &mut rng).unwrap();
        let sub = t.graph.edge_subgraph(&keep);
        assert!(sub.is_connected());
        assert!(pebble_sparse(&sub, 3).is_sparse());
    }

    #[test]
    fn planar_graphs_extend_to_triangulations() {
        let cases = vec![
            ContactGraph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap(),
            ContactGraph::new(7, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap(),
            ContactGraph::cycle(8),
            ContactGraph::new(6, [(0, 1), (1, 2), (3, 4)]).unwrap(),
        ];
        for g in cases {
            let t = triangulate_planar(&g).unwrap();
            t.validate().unwrap();
            for (i, e) in g.edges().iter().enumerate() {
                assert_eq!(t.graph.edge(i), *e);
            }
        }
    }
}
