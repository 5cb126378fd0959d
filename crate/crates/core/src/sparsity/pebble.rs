//! The (2, k) pebble game for k ∈ {2, 3}.
//!
//! Every vertex starts with two pebbles. An edge `uv` is accepted once `k+1`
//! pebbles can be gathered on its endpoints; one of them is then used to
//! cover the edge, which is oriented away from the vertex that paid. If the
//! pebbles cannot be gathered, the vertices reachable from `u` and `v` span a
//! tight subgraph that the new edge overloads.

use super::ContactGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparsityVerdict {
    Sparse,
    Tight,
    Violating,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityCertificate {
    pub k: usize,
    pub verdict: SparsityVerdict,
    /// Vertex set of an overloaded subgraph when the verdict is violating.
    pub witness: Option<Vec<usize>>,
    /// Number of edges of the graph induced by the witness.
    pub witness_edges: usize,
}

impl SparsityCertificate {
    pub fn is_sparse(&self) -> bool {
        self.verdict != SparsityVerdict::Violating
    }

    pub fn is_tight(&self) -> bool {
        self.verdict == SparsityVerdict::Tight
    }
}

/// Incremental pebble game state.
#[derive(Clone, Debug)]
pub struct PebbleGame {
    k: usize,
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
    accepted: usize,
}

impl PebbleGame {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(
            k == 2 || k == 3,
            "pebble game supports k in {{2, 3}}, got {k}"
        );
        Self {
            k,
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
            accepted: 0,
        }
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    /// Tries to insert `uv`; on failure returns the overloaded vertex set.
    pub fn insert(&mut self, u: usize, v: usize) -> Result<(), Vec<usize>> {
        if self.gather(u, v) {
            let (from, to) = if self.pebbles[u] > 0 { (u, v) } else { (v, u) };
            self.pebbles[from] -= 1;
            self.out[from].push(to);
            self.accepted += 1;
            Ok(())
        } else {
            let mut reach = self.reach(u);
            reach.extend(self.reach(v));
            reach.sort_unstable();
            reach.dedup();
            Err(reach)
        }
    }

    /// Whether `uv` could be inserted, without changing the covered edges.
    pub fn would_accept(&mut self, u: usize, v: usize) -> bool {
        self.gather(u, v)
    }

    fn gather(&mut self, u: usize, v: usize) -> bool {
        loop {
            if self.pebbles[u] as usize + self.pebbles[v] as usize > self.k {
                return true;
            }
            if self.pebbles[u] < 2 && self.fetch(u, v) {
                continue;
            }
            if self.pebbles[v] < 2 && self.fetch(v, u) {
                continue;
            }
            return false;
        }
    }

    /// Moves a free pebble to `root` along a directed path avoiding `blocked`.
    fn fetch(&mut self, root: usize, blocked: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        seen[blocked] = true;
        let mut stack = vec![root];
        let mut found = None;
        'search: while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                stack.push(y);
            }
        }
        let Some(target) = found else {
            return false;
        };
        // Reverse every edge on the path root -> ... -> target.
        let mut y = target;
        while y != root {
            let x = parent[y];
            let pos = self.out[x].iter().position(|&z| z == y).expect("path edge");
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        self.pebbles[target] -= 1;
        self.pebbles[root] += 1;
        true
    }

    fn reach(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.pebbles.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    stack.push(y);
                }
            }
        }
        out
    }
}

/// Decides (2,k)-sparsity and tightness of `graph`, with a violating
/// subgraph as witness when the graph is not sparse.
pub fn pebble_sparse(graph: &ContactGraph, k: usize) -> SparsityCertificate {
    let n = graph.vertex_count();
    let mut game = PebbleGame::new(n, k);
    for &(u, v) in graph.edges() {
        if let Err(witness) = game.insert(u, v) {
            let witness_edges = graph.induced_edge_count(&witness);
            debug_assert!(witness_edges + k > 2 * witness.len());
            return SparsityCertificate {
                k,
                verdict: SparsityVerdict::Violating,
                witness: Some(witness),
                witness_edges,
            };
        }
    }
    let tight = graph.edge_count() + k == 2 * n;
    SparsityCertificate {
        k,
        verdict: if tight {
            SparsityVerdict::Tight
        } else {
            SparsityVerdict::Sparse
        },
        witness: None,
        witness_edges: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_22_tight_and_23_violating() {
        let k4 = ContactGraph::complete(4);
        assert_eq!(pebble_sparse(&k4, 2).verdict, SparsityVerdict::Tight);
        let cert = pebble_sparse(&k4, 3);
        assert_eq!(cert.verdict, SparsityVerdict::Violating);
        assert_eq!(cert.witness, Some(vec![0, 1, 2, 3]));
        assert_eq!(cert.witness_edges, 6);
    }

    #[test]
    fn triangle_is_23_tight() {
        assert_eq!(
            pebble_sparse(&ContactGraph::cycle(3), 3).verdict,
            SparsityVerdict::Tight
        );
        assert_eq!(
            pebble_sparse(&ContactGraph::cycle(3), 2).verdict,
            SparsityVerdict::Sparse
        );
    }

    #[test]
    fn witness_overloads_its_vertex_set() {
        // K5 has 10 > 2·5 − 2 edges; the pendant path must stay out of the witness.
        let mut edges: Vec<(usize, usize)> = ContactGraph::complete(5).edges().to_vec();
        edges.push((4, 5));
        edges.push((5, 6));
        let g = ContactGraph::new(7, edges).unwrap();
        let cert = pebble_sparse(&g, 2);
        let witness = cert.witness.unwrap();
        assert!(cert.witness_edges > 2 * witness.len() - 2);
        assert!(witness.iter().all(|&v| v < 5));
    }
}
