//! Plane graphs given by rotation systems, face tracing, and generators.
//!
//! Face convention: the dart after `u -> v` is `v -> w` where `w` follows `u`
//! in the clockwise rotation at `v`.

use crate::graph::{Graph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("vertex {0} has itself in its rotation")]
    SelfLoop(Vertex),
    #[error("vertex {v} lists neighbor {u} more than once")]
    DuplicateNeighbor { v: Vertex, u: Vertex },
    #[error("vertex {0} has two rotation lines")]
    DuplicateVertex(Vertex),
    #[error("edge {u}-{v} appears in the rotation of {u} but not of {v}")]
    Asymmetric { u: Vertex, v: Vertex },
    #[error("rotation of {v} does not match its adjacency")]
    RotationMismatch { v: Vertex },
    #[error(
        "component of vertex {root} fails Euler's formula: V={v} E={e} F={f}, V-E+F={}",
        *v as i64 - *e as i64 + *f as i64
    )]
    Euler { root: Vertex, v: usize, e: usize, f: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertices {u} and {v} are not adjacent, so they cannot be consecutive on a cycle")]
    NotACycle { u: Vertex, v: Vertex },
}

/// A traced face: its boundary walk as darts, or a lone isolated vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<(Vertex, Vertex)>,
    pub isolated: Option<Vertex>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Cyclic vertex sequence of the boundary walk.
    pub fn walk(&self) -> Vec<Vertex> {
        match self.isolated {
            Some(v) => vec![v],
            None => self.darts.iter().map(|&(u, _)| u).collect(),
        }
    }

    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut w = self.walk();
        w.sort_unstable();
        w.dedup();
        w
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaneGraph {
    graph: Graph,
    rotation: Vec<Vec<Vertex>>,
}

impl PlaneGraph {
    /// Builds from `(vertex, clockwise neighbors)` pairs. Checks the rotation is a
    /// well-formed simple rotation system; Euler's formula is checked by `validate`.
    pub fn from_rotations(rots: Vec<(Vertex, Vec<Vertex>)>) -> Result<Self, EmbeddingError> {
        let bound = rots
            .iter()
            .flat_map(|(v, r)| std::iter::once(*v).chain(r.iter().copied()))
            .max()
            .map_or(0, |m| m + 1);
        let mut rotation = vec![Vec::new(); bound];
        let mut seen = vec![false; bound];
        let mut graph = Graph::default();
        for (v, r) in rots {
            if std::mem::replace(&mut seen[v], true) {
                return Err(EmbeddingError::DuplicateVertex(v));
            }
            graph.ensure_vertex(v);
            rotation[v] = r;
        }
        for v in 0..bound {
            let r = &rotation[v];
            let mut sorted = r.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(EmbeddingError::DuplicateNeighbor { v, u: w[0] });
                }
            }
            for &u in r {
                if u == v {
                    return Err(EmbeddingError::SelfLoop(v));
                }
                if !seen[u] || !rotation[u].contains(&v) {
                    return Err(EmbeddingError::Asymmetric { u: v, v: u });
                }
                if v < u {
                    graph.add_edge(v, u);
                }
            }
        }
        Ok(PlaneGraph { graph, rotation })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        self.rotation.get(v).map(|r| r.as_slice()).unwrap_or(&[])
    }

    pub fn num_vertices(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.graph.vertices()
    }

    /// Neighbor following `u` clockwise around `v`.
    pub fn succ(&self, v: Vertex, u: Vertex) -> Vertex {
        let r = &self.rotation[v];
        let i = r.iter().position(|&w| w == u).expect("not a neighbor");
        r[(i + 1) % r.len()]
    }

    /// All faces, traced from darts in order of (tail id, rotation position).
    pub fn faces(&self) -> Vec<Face> {
        let fm = FaceMap::new(self);
        (0..fm.num_faces()).map(|f| fm.face(f)).collect()
    }

    /// Checks rotation well-formedness and Euler's formula on every component.
    pub fn validate(&self) -> Result<(), EmbeddingError> {
        for v in self.graph.vertices() {
            let mut r = self.rotation[v].clone();
            r.sort_unstable();
            if r != self.graph.neighbors(v) {
                return Err(EmbeddingError::RotationMismatch { v });
            }
        }
        let fm = FaceMap::new(self);
        for comp in self.graph.components() {
            let root = comp[0];
            let e: usize = comp.iter().map(|&v| self.graph.degree(v)).sum::<usize>() / 2;
            let f = fm.faces_of_component(&comp);
            if comp.len() as i64 - e as i64 + f as i64 != 2 {
                return Err(EmbeddingError::Euler { root, v: comp.len(), e, f });
            }
        }
        Ok(())
    }

    /// `2 - V + E - F` for a connected embedding.
    pub fn euler_genus(&self) -> Result<usize, EmbeddingError> {
        if !self.graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        let f = FaceMap::new(self).num_faces();
        let g = 2 + self.num_edges() as i64 - self.num_vertices() as i64 - f as i64;
        Ok(g.max(0) as usize)
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        for &u in self.graph.neighbors(v) {
            self.rotation[u].retain(|&w| w != v);
        }
        self.rotation[v].clear();
        self.graph.remove_vertex(v);
    }

    pub fn induced(&self, keep: impl Fn(Vertex) -> bool) -> PlaneGraph {
        let mut pg = self.clone();
        for v in self.vertices() {
            if !keep(v) {
                pg.remove_vertex(v);
            }
        }
        pg
    }

    pub fn add_isolated_vertex(&mut self) -> Vertex {
        let v = self.graph.add_vertex();
        self.rotation.resize(self.graph.id_bound(), Vec::new());
        v
    }

    /// Inserts `w` right after `after` in the rotation at `v` (or as the only
    /// entry when the rotation is empty) and records the edge `v-w` in the graph.
    /// The caller is responsible for the matching insertion at `w`.
    pub(crate) fn insert_after(&mut self, v: Vertex, after: Option<Vertex>, w: Vertex) {
        let bound = self.graph.id_bound().max(v + 1).max(w + 1);
        if self.rotation.len() < bound {
            self.rotation.resize(bound, Vec::new());
        }
        let r = &mut self.rotation[v];
        match after {
            Some(a) => {
                let i = r.iter().position(|&x| x == a).expect("anchor not in rotation");
                r.insert(i + 1, w);
            }
            None => r.push(w),
        }
        self.graph.add_edge(v, w);
    }

    pub(crate) fn set_rotation(&mut self, v: Vertex, rot: Vec<Vertex>) {
        self.graph.ensure_vertex(v);
        if self.rotation.len() <= v {
            self.rotation.resize(v + 1, Vec::new());
        }
        for &u in &rot {
            self.graph.add_edge(v, u);
        }
        self.rotation[v] = rot;
    }

    pub(crate) fn replace_in_rotation(&mut self, v: Vertex, old: Vertex, new: &[Vertex]) {
        let r = &mut self.rotation[v];
        let i = r.iter().position(|&x| x == old).expect("old neighbor not in rotation");
        r.splice(i..i + 1, new.iter().copied());
    }

    pub(crate) fn graph_mut(&mut self) -> &mut Graph {
        &mut self.graph
    }

    /// Splits `cycle`'s component into its two sides. The `left` side is the one
    /// containing the face of the dart `cycle[0] -> cycle[1]`.
    pub fn cycle_sides(&self, cycle: &[Vertex]) -> Result<CycleSides, EmbeddingError> {
        let fm = FaceMap::new(self);
        fm.cycle_sides(self, cycle)
    }

    /// Triangles whose both sides contain a vertex.
    pub fn separating_triangles(&self) -> Vec<[Vertex; 3]> {
        let fm = FaceMap::new(self);
        let g = &self.graph;
        let mut out = Vec::new();
        for a in g.vertices() {
            for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
                for &c in g.neighbors(b).iter().filter(|&&c| c > b) {
                    if !g.has_edge(a, c) {
                        continue;
                    }
                    let s = fm.cycle_sides(self, &[a, b, c]).expect("triangle is a cycle");
                    if !s.left.is_empty() && !s.right.is_empty() {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSides {
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
    /// Vertices outside the cycle's component.
    pub elsewhere: Vec<Vertex>,
}

/// Dart/face incidence tables for one rotation system.
pub(crate) struct FaceMap {
    offset: Vec<usize>,
    head: Vec<Vertex>,
    tail: Vec<Vertex>,
    rev: Vec<usize>,
    face_of: Vec<usize>,
    face_darts: Vec<Vec<usize>>,
    /// face id for each isolated vertex, `usize::MAX` otherwise
    lone_face: Vec<usize>,
}

impl FaceMap {
    pub fn new(pg: &PlaneGraph) -> Self {
        let bound = pg.graph.id_bound();
        let mut offset = vec![0; bound + 1];
        for v in 0..bound {
            offset[v + 1] = offset[v] + pg.rotation(v).len();
        }
        let nd = offset[bound];
        let mut head = vec![0; nd];
        let mut tail = vec![0; nd];
        // sorted (neighbor, position) per vertex for reverse lookup
        let mut pos: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); bound];
        for v in 0..bound {
            for (i, &u) in pg.rotation(v).iter().enumerate() {
                head[offset[v] + i] = u;
                tail[offset[v] + i] = v;
                pos[v].push((u, i));
            }
            pos[v].sort_unstable();
        }
        let index_in = |v: Vertex, u: Vertex| -> usize {
            let p = &pos[v];
            let j = p.binary_search_by_key(&u, |&(w, _)| w).expect("asymmetric rotation");
            p[j].1
        };
        let mut rev = vec![0; nd];
        for d in 0..nd {
            rev[d] = offset[head[d]] + index_in(head[d], tail[d]);
        }
        let mut face_of = vec![usize::MAX; nd];
        let mut face_darts = Vec::new();
        let mut lone_face = vec![usize::MAX; bound];
        for v in 0..bound {
            if !pg.graph.contains(v) {
                continue;
            }
            if pg.rotation(v).is_empty() {
                lone_face[v] = face_darts.len();
                face_darts.push(Vec::new());
                continue;
            }
            for d0 in offset[v]..offset[v + 1] {
                if face_of[d0] != usize::MAX {
                    continue;
                }
                let f = face_darts.len();
                let mut walk = Vec::new();
                let mut d = d0;
                loop {
                    face_of[d] = f;
                    walk.push(d);
                    // next dart: from head, the neighbor after tail
                    let r = rev[d];
                    let h = head[d];
                    let deg = offset[h + 1] - offset[h];
                    d = offset[h] + (r - offset[h] + 1) % deg;
                    if d == d0 {
                        break;
                    }
                }
                face_darts.push(walk);
            }
        }
        FaceMap { offset, head, tail, rev, face_of, face_darts, lone_face }
    }

    pub fn num_faces(&self) -> usize {
        self.face_darts.len()
    }

    pub fn face(&self, f: usize) -> Face {
        let darts: Vec<_> = self.face_darts[f].iter().map(|&d| (self.tail[d], self.head[d])).collect();
        let isolated = if darts.is_empty() {
            self.lone_face.iter().position(|&x| x == f)
        } else {
            None
        };
        Face { darts, isolated }
    }

    pub fn face_len(&self, f: usize) -> usize {
        self.face_darts[f].len()
    }

    pub fn face_dart_ids(&self, f: usize) -> &[usize] {
        &self.face_darts[f]
    }

    pub fn head(&self, d: usize) -> Vertex {
        self.head[d]
    }

    pub fn tail(&self, d: usize) -> Vertex {
        self.tail[d]
    }

    pub fn rev(&self, d: usize) -> usize {
        self.rev[d]
    }

    pub fn face_of(&self, d: usize) -> usize {
        self.face_of[d]
    }

    pub fn out_darts(&self, v: Vertex) -> std::ops::Range<usize> {
        self.offset[v]..self.offset[v + 1]
    }

    /// Faces incident with `v`, possibly repeated.
    pub fn vertex_faces(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        let lone = (self.lone_face[v] != usize::MAX).then_some(self.lone_face[v]);
        self.out_darts(v).map(|d| self.face_of[d]).chain(lone)
    }

    pub fn dart(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.out_darts(u).find(|&d| self.head[d] == v)
    }

    fn faces_of_component(&self, comp: &[Vertex]) -> usize {
        let mut fs: Vec<usize> = comp.iter().flat_map(|&v| self.vertex_faces(v)).collect();
        fs.sort_unstable();
        fs.dedup();
        fs.len()
    }

    pub fn cycle_sides(&self, pg: &PlaneGraph, cycle: &[Vertex]) -> Result<CycleSides, EmbeddingError> {
        let n = cycle.len();
        let mut on_cycle = vec![false; pg.graph.id_bound()];
        let mut cycle_darts = vec![false; self.head.len()];
        for i in 0..n {
            let (u, v) = (cycle[i], cycle[(i + 1) % n]);
            let d = self.dart(u, v).ok_or(EmbeddingError::NotACycle { u, v })?;
            cycle_darts[d] = true;
            cycle_darts[self.rev[d]] = true;
            on_cycle[u] = true;
        }
        let start_left = self.face_of[self.dart(cycle[0], cycle[1]).unwrap()];
        let mut side = vec![0u8; self.num_faces()];
        let mut queue = VecDeque::from([start_left]);
        side[start_left] = 1;
        while let Some(f) = queue.pop_front() {
            for &d in &self.face_darts[f] {
                if cycle_darts[d] {
                    continue;
                }
                let g = self.face_of[self.rev[d]];
                if side[g] == 0 {
                    side[g] = 1;
                    queue.push_back(g);
                }
            }
        }
        let comp_root = cycle[0];
        let mut in_comp = vec![false; pg.graph.id_bound()];
        in_comp[comp_root] = true;
        let mut stack = vec![comp_root];
        while let Some(u) = stack.pop() {
            for &w in pg.graph.neighbors(u) {
                if !in_comp[w] {
                    in_comp[w] = true;
                    stack.push(w);
                }
            }
        }
        let mut out = CycleSides { left: vec![], right: vec![], elsewhere: vec![] };
        for v in pg.graph.vertices() {
            if on_cycle[v] {
                continue;
            }
            if !in_comp[v] {
                out.elsewhere.push(v);
                continue;
            }
            let f = self.face_of[self.offset[v]];
            if side[f] == 1 {
                out.left.push(v);
            } else {
                out.right.push(v);
            }
        }
        Ok(out)
    }
}

/// `r x c` grid; vertex `(i, j)` has id `i * c + j`, row 0 on top.
pub fn generate_grid(r: usize, c: usize) -> PlaneGraph {
    let id = |i: usize, j: usize| i * c + j;
    let mut rots = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            let mut rot = Vec::with_capacity(4);
            // clockwise: up, right, down, left
            if i > 0 {
                rot.push(id(i - 1, j));
            }
            if j + 1 < c {
                rot.push(id(i, j + 1));
            }
            if i + 1 < r {
                rot.push(id(i + 1, j));
            }
            if j > 0 {
                rot.push(id(i, j - 1));
            }
            rots.push((id(i, j), rot));
        }
    }
    PlaneGraph::from_rotations(rots).expect("grid rotation is well formed")
}

/// Vertices on the outer face of `generate_grid(r, c)`, in ascending id order.
pub fn grid_boundary(r: usize, c: usize) -> Vec<Vertex> {
    (0..r * c)
        .filter(|&v| {
            let (i, j) = (v / c, v % c);
            i == 0 || j == 0 || i + 1 == r || j + 1 == c
        })
        .collect()
}

/// Random connected plane graph on `n` vertices: a random plane tree followed by
/// random chords inside faces. Deterministic in `seed`.
pub fn generate_random_planar(n: usize, seed: u64) -> PlaneGraph {
    assert!(n >= 1, "need at least one vertex");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pg = PlaneGraph::default();
    pg.add_isolated_vertex();
    for v in 1..n {
        let u = rng.random_range(0..v);
        let rot = pg.rotation(u).to_vec();
        let after = (!rot.is_empty()).then(|| rot[rng.random_range(0..rot.len())]);
        pg.add_isolated_vertex();
        pg.insert_after(u, after, v);
        pg.insert_after(v, None, u);
    }
    let chords = rng.random_range(0..=2 * n);
    for _ in 0..chords {
        let fm = FaceMap::new(&pg);
        let f = rng.random_range(0..fm.num_faces());
        let darts = fm.face_dart_ids(f).to_vec();
        if darts.len() < 4 {
            continue;
        }
        // corner i sits at head of dart i, between tail(i) and head(i+1)
        let a = rng.random_range(0..darts.len());
        let b = rng.random_range(0..darts.len());
        let (x, p) = (fm.head(darts[a]), fm.tail(darts[a]));
        let (y, q) = (fm.head(darts[b]), fm.tail(darts[b]));
        if x == y || pg.graph.has_edge(x, y) {
            continue;
        }
        pg.insert_after(x, Some(p), y);
        pg.insert_after(y, Some(q), x);
    }
    pg
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> PlaneGraph {
        // outer triangle 0,1,2 clockwise with 3 in the middle
        PlaneGraph::from_rotations(vec![
            (0, vec![1, 3, 2]),
            (1, vec![2, 3, 0]),
            (2, vec![0, 3, 1]),
            (3, vec![0, 1, 2]),
        ])
        .unwrap()
    }

    #[test]
    fn k4_faces() {
        let pg = k4();
        pg.validate().unwrap();
        let faces = pg.faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn single_vertex() {
        let pg = PlaneGraph::from_rotations(vec![(0, vec![])]).unwrap();
        pg.validate().unwrap();
        assert_eq!(pg.faces().len(), 1);
        assert_eq!(pg.faces()[0].walk(), vec![0]);
        assert_eq!(pg.euler_genus().unwrap(), 0);
    }

    #[test]
    fn grid_counts() {
        let g = generate_grid(2, 2);
        assert_eq!(g.num_edges(), 4);
        assert_eq!(g.faces().len(), 2);
        let g = generate_grid(5, 5);
        assert_eq!((g.num_vertices(), g.num_edges()), (25, 40));
        let faces = g.faces();
        assert_eq!(faces.len(), 17);
        assert_eq!(faces.iter().filter(|f| f.len() == 4).count(), 16);
        assert_eq!(faces.iter().map(Face::len).max(), Some(16));
        assert_eq!(faces.iter().map(Face::len).sum::<usize>(), 80);
        assert_eq!(g.euler_genus().unwrap(), 0);
        assert_eq!(grid_boundary(5, 5).len(), 16);
    }

    #[test]
    fn four_cycle_faces() {
        let pg = PlaneGraph::from_rotations(vec![
            (0, vec![1, 3]),
            (1, vec![2, 0]),
            (2, vec![3, 1]),
            (3, vec![0, 2]),
        ])
        .unwrap();
        let faces = pg.faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 4));
    }

    #[test]
    fn rejects_bad_rotations() {
        assert_eq!(
            PlaneGraph::from_rotations(vec![(0, vec![1]), (1, vec![])]),
            Err(EmbeddingError::Asymmetric { u: 0, v: 1 })
        );
        assert!(matches!(
            PlaneGraph::from_rotations(vec![(0, vec![1, 1]), (1, vec![0])]),
            Err(EmbeddingError::DuplicateNeighbor { .. })
        ));
        // K4 with a twisted rotation at one vertex is not planar
        let bad = PlaneGraph::from_rotations(vec![
            (0, vec![1, 2, 3]),
            (1, vec![2, 3, 0]),
            (2, vec![0, 3, 1]),
            (3, vec![0, 1, 2]),
        ])
        .unwrap();
        assert!(matches!(bad.validate(), Err(EmbeddingError::Euler { .. })));
    }

    #[test]
    fn separating_triangle_found() {
        let pg = k4();
        assert!(pg.separating_triangles().is_empty());
        // K4 plus a vertex inside face 0,3,1 gives a separating triangle
        let mut pg2 = pg.clone();
        let w = pg2.add_isolated_vertex();
        pg2.insert_after(0, Some(1), w);
        pg2.insert_after(3, Some(0), w);
        pg2.insert_after(1, Some(3), w);
        pg2.set_rotation(w, vec![0, 1, 3]);
        pg2.validate().unwrap();
        assert_eq!(pg2.separating_triangles(), vec![[0, 1, 3]]);
    }

    #[test]
    fn random_planar_is_deterministic_and_valid() {
        assert_eq!(generate_random_planar(1, 3).num_vertices(), 1);
        for seed in 0..200 {
            let n = 1 + (seed as usize % 17);
            let g = generate_random_planar(n, seed);
            g.validate().unwrap();
            assert!(g.graph().is_connected());
            assert_eq!(g, generate_random_planar(n, seed));
            let total: usize = g.faces().iter().map(Face::len).sum();
            assert_eq!(total, 2 * g.num_edges());
        }
        generate_random_planar(10, 7).validate().unwrap();
    }
}
