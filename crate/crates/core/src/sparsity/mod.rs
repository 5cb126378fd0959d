//! Graph combinatorics for contact graphs: (2,k)-sparsity via the pebble
//! game, planarity with a rotation-system embedding, and random generators
//! for triangulations and their spanning subgraphs.

mod generate;
mod pebble;
mod planar;

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

pub use generate::{
    random_connected_subgraph, random_sparse_spanning_subgraph, random_triangulation,
    triangulate_planar, Triangulation,
};
pub use pebble::{pebble_sparse, PebbleGame, SparsityCertificate, SparsityVerdict};
pub use planar::{is_planar, Embedding};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} = ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange {
        index: usize,
        u: usize,
        v: usize,
        n: usize,
    },
    #[error("edge {index} = ({u}, {u}) is a loop")]
    Loop { index: usize, u: usize },
    #[error("edge {index} = ({u}, {v}) duplicates an earlier edge")]
    Duplicate { index: usize, u: usize, v: usize },
    #[error("requested {requested} edges, allowed range is {min}..={max}")]
    EdgeCount {
        requested: usize,
        min: usize,
        max: usize,
    },
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not planar")]
    NotPlanar,
    #[error("{0}")]
    Invalid(String),
}

/// A finite simple graph with stable dense edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

impl ContactGraph {
    /// Builds a graph on `n` vertices. Edges keep their input order as
    /// indices and are stored with the smaller endpoint first.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut out = Self {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            index: HashMap::new(),
        };
        for (i, (u, v)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { index: i, u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop { index: i, u });
            }
            let key = (u.min(v), u.max(v));
            if out.index.contains_key(&key) {
                return Err(GraphError::Duplicate { index: i, u, v });
            }
            out.index.insert(key, out.edges.len());
            out.edges.push(key);
            out.adjacency[u].push(v);
            out.adjacency[v].push(u);
        }
        Ok(out)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple for n >= 3")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&(u.min(v), u.max(v))).copied()
    }

    /// Number of edges with both endpoints in `vertices`.
    pub fn induced_edge_count(&self, vertices: &[usize]) -> usize {
        let mut member = vec![false; self.n];
        for &v in vertices {
            member[v] = true;
        }
        self.edges
            .iter()
            .filter(|(u, v)| member[*u] && member[*v])
            .count()
    }

    /// Subgraph on the same vertex set keeping the listed edge indices,
    /// renumbered in the given order.
    pub fn edge_subgraph(&self, keep: &[usize]) -> Self {
        Self::new(self.n, keep.iter().map(|&i| self.edges[i])).expect("subgraph of a simple graph")
    }

    /// Non-adjacent vertex pairs `(u, v)` with `u < v`.
    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.component_of(0).len() == self.n
    }

    pub(crate) fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// Connected components as vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for v in 0..self.n {
            if !seen[v] {
                let comp = self.component_of(v);
                for &w in &comp {
                    seen[w] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    /// Maximal planar edge count check `|E| = 3|V| − 6`.
    pub fn has_triangulation_edge_count(&self) -> bool {
        self.n >= 3 && self.edges.len() == 3 * self.n - 6
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_duplicates_and_range() {
        assert!(matches!(
            ContactGraph::new(3, [(0, 0)]),
            Err(GraphError::Loop { index: 0, .. })
        ));
        assert!(matches!(
            ContactGraph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::Duplicate { index: 1, .. })
        ));
        assert!(matches!(
            ContactGraph::new(3, [(0, 1), (2, 3)]),
            Err(GraphError::VertexOutOfRange { index: 1, .. })
        ));
    }

    #[test]
    fn edge_indices_are_dense_and_stable() {
        let g = ContactGraph::new(4, [(2, 1), (0, 3), (1, 0)]).unwrap();
        assert_eq!(g.edge(0), (1, 2));
        assert_eq!(g.edge_index(0, 1), Some(2));
        assert_eq!(g.edge_index(3, 0), Some(1));
        assert_eq!(g.non_edges(), vec![(0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn connectivity() {
        assert!(ContactGraph::cycle(5).is_connected());
        let g = ContactGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.components().len(), 2);
    }
}
