//! Planarity testing by the Demoucron–Malgrange–Pertuiset face-insertion
//! algorithm, run on each biconnected block and glued at cut vertices.

use std::collections::{HashMap, HashSet, VecDeque};

use super::ContactGraph;

/// A combinatorial embedding: the counter-clockwise cyclic order of the
/// neighbours around every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    rotation: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Self {
        Self { rotation }
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub(crate) fn rotations_mut(&mut self) -> &mut Vec<Vec<usize>> {
        &mut self.rotation
    }

    /// Neighbour of `v` that precedes `u` in counter-clockwise order.
    fn before(&self, v: usize, u: usize) -> usize {
        let rot = &self.rotation[v];
        let i = rot
            .iter()
            .position(|&w| w == u)
            .expect("dart of the embedding");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Face boundary walks. Each walk keeps its face on the left, so bounded
    /// faces come out counter-clockwise and the outer face clockwise.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        let mut faces = Vec::new();
        for u in 0..self.rotation.len() {
            for &v in &self.rotation[u] {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut walk = Vec::new();
                let (mut a, mut b) = (u, v);
                while used.insert((a, b)) {
                    walk.push(a);
                    let c = self.before(b, a);
                    a = b;
                    b = c;
                }
                faces.push(walk);
            }
        }
        faces
    }

    /// Checks that the rotation lists exactly the edges of `graph` and that
    /// Euler's formula `V − E + F = 2` holds on every component.
    pub fn is_valid_for(&self, graph: &ContactGraph) -> bool {
        let n = graph.vertex_count();
        if self.rotation.len() != n {
            return false;
        }
        for v in 0..n {
            let mut mine = self.rotation[v].clone();
            let mut theirs = graph.neighbors(v).to_vec();
            mine.sort_unstable();
            theirs.sort_unstable();
            if mine != theirs {
                return false;
            }
        }
        let isolated = (0..n).filter(|&v| graph.degree(v) == 0).count();
        let faces = self.faces().len() + isolated;
        let components = graph.components().len();
        n + faces == graph.edge_count() + 2 * components
    }
}

/// Returns a planar embedding of `graph`, or `None` when it is not planar.
pub fn is_planar(graph: &ContactGraph) -> Option<Embedding> {
    let n = graph.vertex_count();
    if graph.edge_count() > 3 * n.max(3) - 6 {
        return None;
    }
    let mut rotation = vec![Vec::new(); n];
    for block in biconnected_blocks(graph) {
        if block.len() == 1 {
            let (u, v) = block[0];
            rotation[u].push(v);
            rotation[v].push(u);
            continue;
        }
        let faces = embed_block(n, &block)?;
        let mut after: HashMap<(usize, usize), usize> = HashMap::new();
        for face in &faces {
            let len = face.len();
            for i in 0..len {
                let (x, y, z) = (face[i], face[(i + 1) % len], face[(i + 2) % len]);
                after.insert((y, z), x);
            }
        }
        let mut vertices: Vec<usize> = block.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        for y in vertices {
            let degree = block.iter().filter(|&&(u, v)| u == y || v == y).count();
            let start = block
                .iter()
                .find_map(|&(u, v)| {
                    if u == y {
                        Some(v)
                    } else if v == y {
                        Some(u)
                    } else {
                        None
                    }
                })
                .expect("vertex of the block");
            let mut order = vec![start];
            let mut z = after[&(y, start)];
            while z != start {
                order.push(z);
                z = after[&(y, z)];
            }
            debug_assert_eq!(order.len(), degree);
            rotation[y].extend(order);
        }
    }
    let embedding = Embedding { rotation };
    debug_assert!(embedding.is_valid_for(graph));
    Some(embedding)
}

/// Edge sets of the biconnected blocks (bridges are single-edge blocks).
fn biconnected_blocks(graph: &ContactGraph) -> Vec<Vec<(usize, usize)>> {
    struct State<'a> {
        graph: &'a ContactGraph,
        order: Vec<usize>,
        low: Vec<usize>,
        counter: usize,
        stack: Vec<(usize, usize)>,
        blocks: Vec<Vec<(usize, usize)>>,
    }
    fn visit(s: &mut State, v: usize, parent: usize) {
        s.counter += 1;
        s.order[v] = s.counter;
        s.low[v] = s.counter;
        for &w in s.graph.neighbors(v) {
            if s.order[w] == 0 {
                s.stack.push((v, w));
                visit(s, w, v);
                s.low[v] = s.low[v].min(s.low[w]);
                if s.low[w] >= s.order[v] {
                    let mut block = Vec::new();
                    while let Some(e) = s.stack.pop() {
                        block.push(e);
                        if e == (v, w) {
                            break;
                        }
                    }
                    s.blocks.push(block);
                }
            } else if w != parent && s.order[w] < s.order[v] {
                s.stack.push((v, w));
                s.low[v] = s.low[v].min(s.order[w]);
            }
        }
    }
    let n = graph.vertex_count();
    let mut s = State {
        graph,
        order: vec![0; n],
        low: vec![0; n],
        counter: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in 0..n {
        if s.order[v] == 0 {
            visit(&mut s, v, usize::MAX);
        }
    }
    s.blocks
}

struct Fragment {
    attachments: Vec<usize>,
    /// Inner vertices; empty for a single edge between embedded vertices.
    inner: Vec<usize>,
}

/// Embeds a biconnected block and returns its oriented faces.
fn embed_block(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    let mut adjacency = vec![Vec::new(); n];
    for &(u, v) in edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let key = |u: usize, v: usize| (u.min(v), u.max(v));

    let cycle = initial_cycle(&adjacency, edges[0])?;
    let mut embedded = vec![false; n];
    let mut embedded_edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        embedded[cycle[i]] = true;
        embedded_edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces = vec![
        cycle.clone(),
        cycle.iter().rev().copied().collect::<Vec<_>>(),
    ];

    while embedded_edges.len() < edges.len() {
        let fragments = fragments(&adjacency, edges, &embedded, &embedded_edges);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, fragment) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, face)| fragment.attachments.iter().all(|a| face.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_index) = choice.expect("at least one fragment remains");
        let path = fragment_path(&adjacency, &fragments[fi], &embedded);
        for w in path.windows(2) {
            embedded_edges.insert(key(w[0], w[1]));
        }
        for &v in &path {
            embedded[v] = true;
        }
        let face = faces.swap_remove(face_index);
        let (a, b) = split_face(&face, &path);
        faces.push(a);
        faces.push(b);
    }
    Some(faces)
}

/// A cycle through `seed`: the edge plus a shortest path avoiding it.
fn initial_cycle(adjacency: &[Vec<usize>], seed: (usize, usize)) -> Option<Vec<usize>> {
    let (u, v) = seed;
    let mut parent = vec![usize::MAX; adjacency.len()];
    let mut queue = VecDeque::from([u]);
    parent[u] = u;
    while let Some(x) = queue.pop_front() {
        for &y in &adjacency[x] {
            if x == u && y == v {
                continue;
            }
            if parent[y] == usize::MAX {
                parent[y] = x;
                if y == v {
                    let mut path = vec![v];
                    let mut z = v;
                    while z != u {
                        z = parent[z];
                        path.push(z);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

fn fragments(
    adjacency: &[Vec<usize>],
    edges: &[(usize, usize)],
    embedded: &[bool],
    embedded_edges: &HashSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &(u, v) in edges {
        if embedded[u] && embedded[v] && !embedded_edges.contains(&(u.min(v), u.max(v))) {
            out.push(Fragment {
                attachments: vec![u, v],
                inner: Vec::new(),
            });
        }
    }
    let mut seen = vec![false; adjacency.len()];
    for &(u, v) in edges {
        for start in [u, v] {
            if embedded[start] || seen[start] {
                continue;
            }
            let mut inner = Vec::new();
            let mut attachments = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(x) = queue.pop_front() {
                inner.push(x);
                for &y in &adjacency[x] {
                    if embedded[y] {
                        if !attachments.contains(&y) {
                            attachments.push(y);
                        }
                    } else if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            out.push(Fragment { attachments, inner });
        }
    }
    out
}

/// A path through the fragment joining two distinct attachment vertices.
fn fragment_path(adjacency: &[Vec<usize>], fragment: &Fragment, embedded: &[bool]) -> Vec<usize> {
    if fragment.inner.is_empty() {
        return fragment.attachments.clone();
    }
    let a = fragment.attachments[0];
    let mut member = HashSet::new();
    member.extend(fragment.inner.iter().copied());
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &x in &adjacency[a] {
        if member.contains(&x) && !parent.contains_key(&x) {
            parent.insert(x, a);
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adjacency[x] {
            if embedded[y] && y != a {
                let mut path = vec![y, x];
                let mut z = x;
                while z != a {
                    z = parent[&z];
                    path.push(z);
                }
                path.reverse();
                return path;
            }
            if member.contains(&y) && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("a fragment of a biconnected block has two attachments")
}

/// Splits an oriented face along a path between two of its vertices.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let len = face.len();
    let (start, end) = (path[0], *path.last().unwrap());
    let i = face.iter().position(|&x| x == start).unwrap();
    let j = face.iter().position(|&x| x == end).unwrap();
    let interior = &path[1..path.len() - 1];

    let mut first = Vec::new();
    let mut k = i;
    loop {
        first.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % len;
    }
    first.extend(interior.iter().rev());

    let mut second = Vec::new();
    let mut k = j;
    loop {
        second.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % len;
    }
    second.extend(interior.iter());
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(graph: &ContactGraph) -> bool {
        match is_planar(graph) {
            Some(e) => {
                assert!(e.is_valid_for(graph));
                true
            }
            None => false,
        }
    }

    #[test]
    fn small_classics() {
        assert!(check(&ContactGraph::complete(4)));
        assert!(!check(&ContactGraph::complete(5)));
        let k33 = ContactGraph::new(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap();
        assert!(!check(&k33));
        let mut k5e: Vec<_> = ContactGraph::complete(5).edges().to_vec();
        k5e.pop();
        assert!(check(&ContactGraph::new(5, k5e).unwrap()));
    }

    #[test]
    fn trees_cut_vertices_and_isolated_points() {
        let tree = ContactGraph::new(6, [(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        assert!(check(&tree));
        let bowtie =
            ContactGraph::new(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        assert!(check(&bowtie));
    }

    #[test]
    fn petersen_is_not_planar() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = ContactGraph::new(10, outer.chain(spokes).chain(inner)).unwrap();
        assert!(!check(&g));
    }

    #[test]
    fn octahedron_and_cube_are_planar() {
        let octa = ContactGraph::new(
            6,
            [
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 2),
            ],
        )
        .unwrap();
        assert!(check(&octa));
        let e = is_planar(&octa).unwrap();
        assert!(e.faces().iter().all(|f| f.len() == 3));
        let cube = ContactGraph::new(
            8,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        )
        .unwrap();
        assert!(check(&cube));
    }
}
