//! k-nest detection by ring growth around a candidate egg, and nest reduction.

use crate::graph::Vertex;
use crate::plane::{EmbeddingError, FaceMap, PlaneGraph};
use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

/// Nested cycles `cycles[0]` (outermost) to `cycles[k]`, with the vertex set strictly
/// inside each, measured on the side containing `egg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nest {
    pub egg: Vertex,
    pub cycles: Vec<Vec<Vertex>>,
    pub interiors: Vec<Vec<Vertex>>,
    pub eggs: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NestViolation {
    #[error("a k-nest needs at least two cycles, got {0}")]
    TooFewCycles(usize),
    #[error("cycle {0} is not a simple cycle")]
    NotSimple(usize),
    #[error("cycles {0} and {1} share a vertex")]
    Overlap(usize, usize),
    #[error("egg {0} lies on a cycle or outside the cycle's component")]
    EggPlacement(Vertex),
    #[error("stored interior of cycle {0} differs from the traced one")]
    InteriorMismatch(usize),
    #[error("disk {0} is not inside the previous disk")]
    NotNested(usize),
    #[error("X vertex {0} lies inside the outermost disk")]
    XInside(Vertex),
    #[error("egg set is empty or differs from the innermost interior")]
    Eggs,
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

impl Nest {
    pub fn k(&self) -> usize {
        self.cycles.len() - 1
    }

    /// Re-derives every nest axiom from the embedding.
    pub fn verify(&self, pg: &PlaneGraph, x: &[Vertex]) -> Result<(), NestViolation> {
        if self.cycles.len() < 2 {
            return Err(NestViolation::TooFewCycles(self.cycles.len()));
        }
        for (i, c) in self.cycles.iter().enumerate() {
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if c.len() < 3 || s.len() != c.len() {
                return Err(NestViolation::NotSimple(i));
            }
            for j in 0..i {
                if self.cycles[j].iter().any(|v| s.binary_search(v).is_ok()) {
                    return Err(NestViolation::Overlap(j, i));
                }
            }
        }
        let mut inner = Vec::new();
        for (i, c) in self.cycles.iter().enumerate() {
            let sides = pg.cycle_sides(c)?;
            let int = if sides.left.contains(&self.egg) {
                sides.left
            } else if sides.right.contains(&self.egg) {
                sides.right
            } else {
                return Err(NestViolation::EggPlacement(self.egg));
            };
            if int != self.interiors[i] {
                return Err(NestViolation::InteriorMismatch(i));
            }
            inner.push(int);
        }
        for i in 1..self.cycles.len() {
            let outer = &inner[i - 1];
            if self.cycles[i].iter().chain(&inner[i]).any(|v| outer.binary_search(v).is_err()) {
                return Err(NestViolation::NotNested(i));
            }
        }
        if let Some(&v) = x.iter().find(|v| inner[0].binary_search(v).is_ok()) {
            return Err(NestViolation::XInside(v));
        }
        if self.eggs.is_empty() || &self.eggs != inner.last().unwrap() {
            return Err(NestViolation::Eggs);
        }
        Ok(())
    }
}

/// `max(1, ceil(58 log2 n))`.
pub fn paper_depth(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    ((58.0 * (n as f64).log2()).ceil() as usize).max(1)
}

/// Grows disks around `v` ring by ring and returns the first `k`-nest found,
/// or `None` when the procedure fails (it is sound but not complete).
pub fn find_nest_at(pg: &PlaneGraph, v: Vertex, k: usize, x: &[Vertex]) -> Option<Nest> {
    let fm = FaceMap::new(pg);
    detect(pg, &fm, v, k, &x_mask(pg, x))
}

fn x_mask(pg: &PlaneGraph, x: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; pg.graph().id_bound()];
    for &v in x {
        if v < m.len() {
            m[v] = true;
        }
    }
    m
}

fn detect(pg: &PlaneGraph, fm: &FaceMap, v: Vertex, k: usize, in_x: &[bool]) -> Option<Nest> {
    let g = pg.graph();
    if k == 0 || !g.contains(v) || in_x[v] || g.degree(v) == 0 {
        return None;
    }
    let bound = g.id_bound();
    let mut in_comp = vec![false; bound];
    let mut comp = vec![v];
    in_comp[v] = true;
    let mut i = 0;
    while i < comp.len() {
        for &w in g.neighbors(comp[i]) {
            if !in_comp[w] {
                in_comp[w] = true;
                comp.push(w);
            }
        }
        i += 1;
    }
    // X elsewhere could sit inside any disk once components are placed; give up
    if g.vertices().any(|u| in_x[u] && !in_comp[u]) {
        return None;
    }
    comp.sort_unstable();
    let nf = fm.num_faces();
    let mut comp_faces: Vec<usize> = comp.iter().flat_map(|&u| fm.vertex_faces(u)).collect();
    comp_faces.sort_unstable();
    comp_faces.dedup();

    let mut region = vec![false; nf];
    for f in fm.vertex_faces(v) {
        region[f] = true;
    }
    let mut on_cycle = vec![false; bound];
    let mut found: Vec<(Vec<Vertex>, Vec<Vertex>)> = Vec::new();
    let mut comp_id = vec![usize::MAX; nf];
    let mut on_boundary = vec![false; bound];

    loop {
        // components of the complement, joined across shared edges
        for &f in &comp_faces {
            comp_id[f] = usize::MAX;
        }
        let mut holes: Vec<Vec<usize>> = Vec::new();
        for &f in &comp_faces {
            if region[f] || comp_id[f] != usize::MAX {
                continue;
            }
            let id = holes.len();
            comp_id[f] = id;
            let mut faces = vec![f];
            let mut queue = VecDeque::from([f]);
            while let Some(h) = queue.pop_front() {
                for &d in fm.face_dart_ids(h) {
                    let h2 = fm.face_of(fm.rev(d));
                    if !region[h2] && comp_id[h2] == usize::MAX {
                        comp_id[h2] = id;
                        faces.push(h2);
                        queue.push_back(h2);
                    }
                }
            }
            holes.push(faces);
        }
        if holes.is_empty() {
            return None;
        }
        let mut strict = vec![0usize; holes.len()];
        let mut has_x = vec![false; holes.len()];
        for &u in &comp {
            let mut fs = fm.vertex_faces(u);
            let first = fs.next().unwrap();
            if !region[first] && fs.all(|f| !region[f]) {
                strict[comp_id[first]] += 1;
                has_x[comp_id[first]] |= in_x[u];
            }
        }
        let out = (0..holes.len())
            .max_by_key(|&c| (has_x[c], strict[c], holes[c].len(), Reverse(holes[c][0])))
            .unwrap();

        // darts on the outside's side of the boundary
        let mut bdarts = Vec::new();
        for &f in &holes[out] {
            for &d in fm.face_dart_ids(f) {
                if comp_id[fm.face_of(fm.rev(d))] != out {
                    bdarts.push(d);
                }
            }
        }
        if bdarts.is_empty() {
            return None;
        }
        for &u in &comp {
            on_boundary[u] = false;
        }
        for &d in &bdarts {
            on_boundary[fm.tail(d)] = true;
        }
        let mut interior = Vec::new();
        for &u in &comp {
            if on_boundary[u] {
                continue;
            }
            let f = fm.vertex_faces(u).next().unwrap();
            if comp_id[f] != out {
                if in_x[u] {
                    return None;
                }
                interior.push(u);
            }
        }

        if let Some(cycle) = simple_boundary_cycle(fm, &bdarts, bound) {
            if cycle.iter().all(|&u| !on_cycle[u]) {
                for &u in &cycle {
                    on_cycle[u] = true;
                }
                found.push((cycle, interior));
                if found.len() == k + 1 {
                    found.reverse();
                    let (cycles, interiors): (Vec<_>, Vec<_>) = found.into_iter().unzip();
                    let eggs = interiors.last().unwrap().clone();
                    return Some(Nest { egg: v, cycles, interiors, eggs });
                }
            }
        }

        // next disk: everything but the outside, plus all faces at the boundary
        for &f in &comp_faces {
            if comp_id[f] != out {
                region[f] = true;
            }
        }
        for &d in &bdarts {
            for f in fm.vertex_faces(fm.tail(d)) {
                region[f] = true;
            }
        }
    }
}

/// The boundary darts as one simple cycle, if they form exactly one.
fn simple_boundary_cycle(fm: &FaceMap, bdarts: &[usize], bound: usize) -> Option<Vec<Vertex>> {
    let mut next = vec![usize::MAX; bound];
    let mut indeg = vec![0u8; bound];
    for &d in bdarts {
        let (t, h) = (fm.tail(d), fm.head(d));
        if next[t] != usize::MAX {
            return None;
        }
        next[t] = h;
        indeg[h] += 1;
        if indeg[h] > 1 {
            return None;
        }
    }
    let start = fm.tail(bdarts[0]);
    let mut cycle = vec![start];
    let mut u = next[start];
    while u != start {
        if u == usize::MAX || cycle.len() > bdarts.len() {
            return None;
        }
        cycle.push(u);
        u = next[u];
    }
    (cycle.len() == bdarts.len() && cycle.len() >= 3).then_some(cycle)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestReduction {
    pub graph: PlaneGraph,
    /// Removed eggs in removal order.
    pub removed: Vec<Vertex>,
}

/// Removes eggs of `k`-nests with respect to `x` until none is detected.
///
/// Candidates are tried in ascending id order; after a removal the smallest
/// pending candidate is retried first, and the neighbors of the removed egg are
/// queued again. A full pass without removals ends the loop.
pub fn nest_reduce(pg: &PlaneGraph, x: &[Vertex], k: usize) -> NestReduction {
    let mut g = pg.clone();
    let mut removed = Vec::new();
    // k+1 disjoint cycles of length >= 3 plus an egg
    if k == 0 || 3 * (k + 1) + 1 > g.num_vertices() {
        return NestReduction { graph: g, removed };
    }
    let in_x = x_mask(&g, x);
    loop {
        let mut pending: BTreeSet<Vertex> = g.vertices().filter(|&v| !in_x[v]).collect();
        let mut fm = FaceMap::new(&g);
        let mut changed = false;
        while let Some(v) = pending.pop_first() {
            if detect(&g, &fm, v, k, &in_x).is_none() {
                continue;
            }
            let nbrs = g.graph().neighbors(v).to_vec();
            g.remove_vertex(v);
            removed.push(v);
            changed = true;
            fm = FaceMap::new(&g);
            pending.extend(nbrs.into_iter().filter(|&u| !in_x[u]));
        }
        if !changed {
            break;
        }
    }
    NestReduction { graph: g, removed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{generate_grid, grid_boundary};

    #[test]
    fn depth_formula() {
        assert_eq!(paper_depth(1), 1);
        assert_eq!(paper_depth(2), 58);
        assert_eq!(paper_depth(1024), 580);
    }

    #[test]
    fn grid_5x5_center() {
        let g = generate_grid(5, 5);
        let x = grid_boundary(5, 5);
        let nest = find_nest_at(&g, 12, 1, &x).expect("nest");
        nest.verify(&g, &x).unwrap();
        let mut c0 = nest.cycles[0].clone();
        c0.sort_unstable();
        assert_eq!(c0, x);
        let mut c1 = nest.cycles[1].clone();
        c1.sort_unstable();
        assert_eq!(c1, vec![6, 7, 8, 11, 13, 16, 17, 18]);
        assert_eq!(nest.eggs, vec![12]);
    }

    #[test]
    fn k4_has_no_nest() {
        let k4 = PlaneGraph::from_rotations(vec![
            (0, vec![1, 3, 2]),
            (1, vec![2, 3, 0]),
            (2, vec![0, 3, 1]),
            (3, vec![0, 1, 2]),
        ])
        .unwrap();
        for v in 0..4 {
            assert!(find_nest_at(&k4, v, 1, &[]).is_none());
        }
    }

    #[test]
    fn reduce_trivial_cases() {
        let g = generate_grid(5, 5);
        let all: Vec<_> = g.vertices().collect();
        assert!(nest_reduce(&g, &all, 1).removed.is_empty());
        assert!(nest_reduce(&g, &[], 30).removed.is_empty());
    }

    #[test]
    fn reduce_9x9_is_fixed_point() {
        let g = generate_grid(9, 9);
        let x = grid_boundary(9, 9);
        let r = nest_reduce(&g, &x, 1);
        assert!(!r.removed.is_empty());
        assert!(x.iter().all(|v| r.graph.graph().contains(*v)));
        for v in r.graph.vertices() {
            assert!(find_nest_at(&r.graph, v, 1, &x).is_none());
        }
        assert!(nest_reduce(&r.graph, &x, 1).removed.is_empty());
        r.graph.validate().unwrap();
    }
}
