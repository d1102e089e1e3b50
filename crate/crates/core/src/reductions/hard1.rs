//! Planar 3-coloring to 4-list-coloring of 4-connected planar graphs: quasiedges,
//! precoloring copies of a critical graph, and wheel filling.

use crate::coloring::{list_color, Color, ColorSet, ColoringError, ListAssignment, MAX_COLOR};
use crate::graph::Vertex;
use crate::plane::{EmbeddingError, FaceMap, PlaneGraph};
use thiserror::Error;

/// Replaces every edge `uv` (`u < v`) by the gadget on new vertices `a, b, c` with
/// edges `ua ub ab ac bc cv`. In a 3-coloring `c` repeats the color of `u`, so the
/// endpoints differ; every triangle of the output bounds a face.
pub fn quasiedge_replace(pg: &PlaneGraph) -> PlaneGraph {
    let mut out = pg.clone();
    let edges: Vec<_> = pg.graph().edges().collect();
    for (u, v) in edges {
        out.graph_mut().remove_edge(u, v);
        let a = out.add_isolated_vertex();
        let b = out.add_isolated_vertex();
        let c = out.add_isolated_vertex();
        out.replace_in_rotation(u, v, &[a, b]);
        out.replace_in_rotation(v, u, &[c]);
        out.set_rotation(a, vec![c, b, u]);
        out.set_rotation(b, vec![u, a, c]);
        out.set_rotation(c, vec![b, a, v]);
    }
    out
}

/// A candidate critical graph supplied by the caller, with a vertex `x` used as
/// the attachment point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalGraphInput {
    pub plane: PlaneGraph,
    pub lists: ListAssignment,
    pub x: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriticalError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("x = {0} is not a vertex")]
    MissingX(Vertex),
    #[error("the graph is colorable from its lists")]
    Colorable,
    #[error("still not colorable after deleting {0}")]
    NotMinimal(String),
    #[error("vertex {0} uses a color in 1..=3")]
    ReservedColor(Vertex),
    #[error("list of x has {0} colors, need at least 3")]
    ShortXList(usize),
    #[error("separating triangle {0:?}")]
    SeparatingTriangle([Vertex; 3]),
    #[error("x is on no face of length at least 4")]
    NoLongFace,
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

impl CriticalGraphInput {
    /// Not colorable, colorable after deleting any edge or vertex, lists clear of
    /// `1..=3`, no separating triangle, and `x` on a face of length at least 4.
    pub fn validate(&self) -> Result<(), CriticalError> {
        let pg = &self.plane;
        let g = pg.graph();
        pg.validate()?;
        if !g.contains(self.x) {
            return Err(CriticalError::MissingX(self.x));
        }
        let reserved = ColorSet::range(3);
        for v in g.vertices() {
            if !self.lists.get(v).intersection(reserved).is_empty() {
                return Err(CriticalError::ReservedColor(v));
            }
        }
        let xl = self.lists.get(self.x).len();
        if xl < 3 {
            return Err(CriticalError::ShortXList(xl));
        }
        if let Some(&t) = pg.separating_triangles().first() {
            return Err(CriticalError::SeparatingTriangle(t));
        }
        if attach_dart(pg, self.x).is_none() {
            return Err(CriticalError::NoLongFace);
        }
        if list_color(g, &self.lists)?.is_some() {
            return Err(CriticalError::Colorable);
        }
        for (u, v) in g.edges() {
            let mut h = g.clone();
            h.remove_edge(u, v);
            if list_color(&h, &self.lists)?.is_none() {
                return Err(CriticalError::NotMinimal(format!("edge {u}-{v}")));
            }
        }
        for v in g.vertices() {
            let mut h = g.clone();
            h.remove_vertex(v);
            if list_color(&h, &self.lists)?.is_none() {
                return Err(CriticalError::NotMinimal(format!("vertex {v}")));
            }
        }
        Ok(())
    }
}

/// `K_{2,4}` on `x, z, y_1..y_4` with `L(x) = {4..7}`, `L(z) = {8}`,
/// `L(y_i) = {3 + i, 8}`: `z` forces the `y_i` to exhaust the list of `x`.
pub fn small_critical_graph() -> CriticalGraphInput {
    let (x, z) = (0, 1);
    let ys = [2, 3, 4, 5];
    let mut rots = vec![(x, ys.to_vec()), (z, ys.iter().rev().copied().collect())];
    for &y in &ys {
        rots.push((y, vec![x, z]));
    }
    let plane = PlaneGraph::from_rotations(rots).expect("K_{2,4} rotation");
    let mut lists = ListAssignment::new();
    lists.set(x, [4, 5, 6, 7].into_iter().collect());
    lists.set(z, ColorSet::single(8));
    for (i, &y) in ys.iter().enumerate() {
        lists.set(y, [4 + i as Color, 8].into_iter().collect());
    }
    CriticalGraphInput { plane, lists, x }
}

/// Neighbor `h` of `x` such that the face containing dart `x -> h` is the longest
/// face at `x` of length at least 4 (smallest face id on ties).
fn attach_dart(pg: &PlaneGraph, x: Vertex) -> Option<Vertex> {
    let fm = FaceMap::new(pg);
    fm.out_darts(x)
        .filter(|&d| fm.face_len(fm.face_of(d)) >= 4)
        .max_by_key(|&d| (fm.face_len(fm.face_of(d)), std::cmp::Reverse(fm.face_of(d))))
        .map(|d| fm.head(d))
}

/// Attaches a copy of `crit` at every vertex `v` of `g1`, identifying `x` with `v`
/// and drawing the copy inside the longest face at `v`. Vertices of `g1` get
/// `{1, 2, 3}` plus the list of `x` without its three largest colors.
pub fn precolor_attach(
    g1: &PlaneGraph,
    crit: &CriticalGraphInput,
) -> Result<(PlaneGraph, ListAssignment), CriticalError> {
    crit.validate()?;
    let h = &crit.plane;
    let x = crit.x;
    let h_out = attach_dart(h, x).ok_or(CriticalError::NoLongFace)?;
    let hx = h.rotation(x);
    let start = hx.iter().position(|&w| w == h_out).unwrap();
    let x_order: Vec<Vertex> = (0..hx.len()).map(|i| hx[(start + i) % hx.len()]).collect();

    let mut xl: Vec<Color> = crit.lists.get(x).iter().collect();
    xl.truncate(xl.len() - 3);
    let base: ColorSet = ColorSet::range(3).union(xl.into_iter().collect());

    let fm = FaceMap::new(g1);
    let mut corners = Vec::new();
    for v in g1.vertices() {
        let d = fm
            .out_darts(v)
            .filter(|&d| fm.face_len(fm.face_of(fm.rev(d))) >= 4)
            .max_by_key(|&d| (fm.face_len(fm.face_of(fm.rev(d))), std::cmp::Reverse(fm.face_of(fm.rev(d)))));
        // corner p -> v -> succ(p) lies on the face of the dart p -> v
        corners.push((v, d.map(|d| fm.head(d))));
    }

    let mut out = g1.clone();
    let mut lists = ListAssignment::new();
    for v in g1.vertices() {
        lists.set(v, base);
    }
    for (v, p) in corners {
        let mut map = vec![usize::MAX; h.graph().id_bound()];
        map[x] = v;
        for w in h.vertices().filter(|&w| w != x) {
            map[w] = out.add_isolated_vertex();
            lists.set(map[w], crit.lists.get(w));
        }
        for w in h.vertices().filter(|&w| w != x) {
            out.set_rotation(map[w], h.rotation(w).iter().map(|&u| map[u]).collect());
        }
        let mut anchor = p;
        for &w in &x_order {
            out.insert_after(v, anchor, map[w]);
            anchor = Some(map[w]);
        }
    }
    Ok((out, lists))
}

/// Fills every face of length at least 4 with a wheel: rim `w_1..w_m`, hub `h`,
/// and edges `v_i w_i`, `v_i w_{i+1}`. All new vertices share one fresh 4-list
/// above every color in `l2`.
pub fn wheel_fill(g2: &PlaneGraph, l2: &ListAssignment) -> Result<(PlaneGraph, ListAssignment), ColoringError> {
    let top = l2.max_color();
    if top as usize + 4 > MAX_COLOR as usize {
        return Err(ColoringError::CapExceeded { size: top as usize + 4, cap: MAX_COLOR as usize });
    }
    let fresh: ColorSet = (top + 1..=top + 4).collect();
    let fm = FaceMap::new(g2);
    let mut out = g2.clone();
    let mut lists = l2.clone();
    for f in 0..fm.num_faces() {
        let walk = fm.face(f).walk();
        let m = walk.len();
        if m < 4 {
            continue;
        }
        let w: Vec<Vertex> = (0..m).map(|_| out.add_isolated_vertex()).collect();
        let hub = out.add_isolated_vertex();
        // w[i] sits on the edge walk[i-1] walk[i]
        for i in 0..m {
            let prev = walk[(i + m - 1) % m];
            out.insert_after(walk[i], Some(prev), w[i]);
            out.insert_after(walk[i], Some(w[i]), w[(i + 1) % m]);
        }
        for i in 0..m {
            let wi = w[(i + 1) % m];
            let rot = vec![walk[(i + 1) % m], walk[i], w[i], hub, w[(i + 2) % m]];
            out.set_rotation(wi, rot);
        }
        out.set_rotation(hub, w.iter().rev().copied().collect());
        for &v in w.iter().chain([&hub]) {
            lists.set(v, fresh);
        }
    }
    Ok((out, lists))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{brute_force_color_with, compute_phi};
    use crate::connectivity::vertex_connectivity_at_least;
    use crate::graph::Graph;
    use crate::plane::generate_grid;

    fn k_n(n: usize) -> PlaneGraph {
        // planar drawings of K_2, K_3, K_4
        let rots = match n {
            2 => vec![(0, vec![1]), (1, vec![0])],
            3 => vec![(0, vec![1, 2]), (1, vec![2, 0]), (2, vec![0, 1])],
            _ => vec![(0, vec![1, 2, 3]), (1, vec![0, 3, 2]), (2, vec![0, 1, 3]), (3, vec![0, 2, 1])],
        };
        PlaneGraph::from_rotations(rots).unwrap()
    }

    fn three_colorable(g: &Graph) -> bool {
        let l = ListAssignment::uniform(g, ColorSet::range(3));
        brute_force_color_with(g, &l, 64).unwrap().is_some()
    }

    #[test]
    fn quasiedge_contract() {
        let q = quasiedge_replace(&k_n(2));
        q.validate().unwrap();
        let l = ListAssignment::uniform(q.graph(), ColorSet::range(3));
        let phi = compute_phi(q.graph(), &l, &[0, 1]).unwrap();
        assert_eq!(phi.members.len(), 6);
        assert!(phi.members.iter().all(|t| t[0] != t[1]));
        for n in [2, 3, 4] {
            let q = quasiedge_replace(&k_n(n));
            q.validate().unwrap();
            assert!(q.separating_triangles().is_empty());
            let fm = FaceMap::new(&q);
            for v in q.vertices() {
                assert!(fm.vertex_faces(v).any(|f| fm.face_len(f) >= 4), "vertex {v}");
            }
            assert_eq!(three_colorable(q.graph()), n <= 3);
        }
    }

    #[test]
    fn critical_validation() {
        small_critical_graph().validate().unwrap();
        let mut easy = small_critical_graph();
        easy.lists.set(1, [8, 9].into_iter().collect());
        assert_eq!(easy.validate(), Err(CriticalError::Colorable));
        let mut reserved = small_critical_graph();
        reserved.lists.set(1, ColorSet::single(2));
        assert_eq!(reserved.validate(), Err(CriticalError::ReservedColor(1)));
    }

    #[test]
    fn precolor_equivalence() {
        let crit = small_critical_graph();
        for n in [2, 3, 4] {
            let g1 = quasiedge_replace(&k_n(n));
            let (g2, l2) = precolor_attach(&g1, &crit).unwrap();
            g2.validate().unwrap();
            assert!(g2.separating_triangles().is_empty());
            let got = list_color(g2.graph(), &l2).unwrap();
            assert_eq!(got.is_some(), three_colorable(g1.graph()));
            if let Some(c) = got {
                assert!(g1.vertices().all(|v| c.get(v).unwrap() <= 3));
            }
        }
    }

    #[test]
    fn wheel_fill_examples() {
        let c4 = PlaneGraph::from_rotations(vec![
            (0, vec![1, 3]),
            (1, vec![2, 0]),
            (2, vec![3, 1]),
            (3, vec![0, 2]),
        ])
        .unwrap();
        let l = ListAssignment::uniform(c4.graph(), ColorSet::range(2));
        let (g3, l3) = wheel_fill(&c4, &l).unwrap();
        g3.validate().unwrap();
        assert_eq!(g3.num_vertices(), 4 + 2 * 5);
        assert!(g3.faces().iter().all(|f| f.len() == 3));
        assert_eq!(l3.get(13), (3..=6).collect());
        assert!(list_color(g3.graph(), &l3).unwrap().is_some());

        let grid = generate_grid(3, 3);
        let (g3, _) = wheel_fill(&grid, &ListAssignment::uniform(grid.graph(), ColorSet::range(3))).unwrap();
        g3.validate().unwrap();
        assert!(g3.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn hard1_chain_is_four_connected() {
        let g1 = quasiedge_replace(&k_n(2));
        let (g2, l2) = precolor_attach(&g1, &small_critical_graph()).unwrap();
        let (g3, l3) = wheel_fill(&g2, &l2).unwrap();
        g3.validate().unwrap();
        assert!(g3.faces().iter().all(|f| f.len() == 3));
        assert!(g3.separating_triangles().is_empty());
        assert!(vertex_connectivity_at_least(g3.graph(), 4));
        assert_eq!(list_color(g3.graph(), &l3).unwrap().is_some(), true);
    }
}
