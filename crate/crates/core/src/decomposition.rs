//! Clique-sums of almost embedded pieces, supplied as input data.

use crate::graph::{Graph, Vertex};
use crate::plane::{EmbeddingError, FaceMap, PlaneGraph};
use crate::treewidth::{ComposeError, VortexPathDecomposition};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ApexKind {
    /// neighbors only among apices and vortex vertices
    Restricted,
    Free,
}

impl ApexKind {
    pub fn name(self) -> &'static str {
        match self {
            ApexKind::Restricted => "restricted",
            ApexKind::Free => "free",
        }
    }
}

/// A vortex: its path decomposition plus the edges of the vortex graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vortex {
    pub path: VortexPathDecomposition,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostEmbeddedPiece {
    pub embedded: PlaneGraph,
    pub vortices: Vec<Vortex>,
    pub apices: Vec<(Vertex, ApexKind)>,
    pub apex_edges: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSum {
    pub a: usize,
    pub b: usize,
    pub shared: Vec<Vertex>,
    /// clique edges removed from the summed graph
    pub dropped: Vec<(Vertex, Vertex)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSumDecomposition {
    pub pieces: Vec<AlmostEmbeddedPiece>,
    pub sums: Vec<CliqueSum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("piece {piece}: {source}")]
    Embedding { piece: usize, source: EmbeddingError },
    #[error("piece {piece}: {source}")]
    Vortex { piece: usize, source: ComposeError },
    #[error("piece {piece}: boundary of vortex {vortex} does not follow a face")]
    VortexNotOnFace { piece: usize, vortex: usize },
    #[error("piece {piece}: vortex edge {u}-{v} is not inside one vortex bag")]
    VortexEdge { piece: usize, u: Vertex, v: Vertex },
    #[error("piece {piece}: apex {v} is also embedded, in a vortex, or listed twice")]
    ApexPlacement { piece: usize, v: Vertex },
    #[error("piece {piece}: edge {u}-{v} in an apex section has no apex endpoint")]
    ApexEdge { piece: usize, u: Vertex, v: Vertex },
    #[error("piece {piece}: restricted apex {apex} is adjacent to embedded vertex {v} off the vortex boundaries")]
    RestrictedApex { piece: usize, apex: Vertex, v: Vertex },
    #[error("sum {sum}: names a missing piece, or the sums do not form a tree over the pieces")]
    SumTree { sum: usize },
    #[error("sum {sum}: shared vertex {v} missing from piece {piece}")]
    SharedMissing { sum: usize, v: Vertex, piece: usize },
    #[error("sum {sum}: shared vertices {u} and {v} are not adjacent in piece {piece}")]
    NotClique { sum: usize, u: Vertex, v: Vertex, piece: usize },
    #[error("sum {sum}: dropped edge {u}-{v} is not a pair of shared vertices")]
    DropNotShared { sum: usize, u: Vertex, v: Vertex },
    #[error("vertex {0} lies in pieces not joined through sums sharing it")]
    VertexSplit(Vertex),
}

impl AlmostEmbeddedPiece {
    pub fn plane(embedded: PlaneGraph) -> Self {
        AlmostEmbeddedPiece { embedded, vortices: vec![], apices: vec![], apex_edges: vec![] }
    }

    /// Embedded part, vortex graphs and apex edges together.
    pub fn graph(&self) -> Graph {
        let mut g = self.embedded.graph().clone();
        for vx in &self.vortices {
            for v in vx.path.vertices() {
                g.ensure_vertex(v);
            }
            for &(u, v) in &vx.edges {
                g.add_edge(u, v);
            }
        }
        for &(a, _) in &self.apices {
            g.ensure_vertex(a);
        }
        for &(u, v) in &self.apex_edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn apex_vertices(&self) -> Vec<Vertex> {
        let mut a: Vec<Vertex> = self.apices.iter().map(|a| a.0).collect();
        a.sort_unstable();
        a
    }

    pub fn free_apices(&self) -> usize {
        self.apices.iter().filter(|a| a.1 == ApexKind::Free).count()
    }

    /// All vortex boundary vertices, ascending.
    pub fn boundary(&self) -> Vec<Vertex> {
        let mut b: Vec<Vertex> = self.vortices.iter().flat_map(|vx| vx.path.boundary.iter().copied()).collect();
        b.sort_unstable();
        b.dedup();
        b
    }

    pub fn is_degenerate(&self) -> bool {
        self.embedded.num_vertices() <= 4
    }

    pub fn validate(&self, piece: usize) -> Result<(), DecompositionError> {
        let pg = &self.embedded;
        pg.validate().map_err(|source| DecompositionError::Embedding { piece, source })?;
        let vx_err = |source| DecompositionError::Vortex { piece, source };
        let fm = FaceMap::new(pg);
        let walks: Vec<Vec<Vertex>> = (0..fm.num_faces()).map(|f| fm.face(f).walk()).collect();
        let mut owner = BTreeMap::new();
        for (i, vx) in self.vortices.iter().enumerate() {
            vx.path.validate().map_err(vx_err)?;
            for &v in &vx.path.boundary {
                if !pg.graph().contains(v) {
                    return Err(vx_err(ComposeError::BoundaryMissing(v)));
                }
            }
            for v in vx.path.vertices() {
                if owner.insert(v, i).is_some() {
                    return Err(vx_err(ComposeError::Overlap(v)));
                }
                if pg.graph().contains(v) && !vx.path.boundary.contains(&v) {
                    return Err(vx_err(ComposeError::InternalEmbedded(v)));
                }
            }
            if !walks.iter().any(|w| follows_walk(w, &vx.path.boundary)) {
                return Err(DecompositionError::VortexNotOnFace { piece, vortex: i });
            }
            for &(u, v) in &vx.edges {
                let inside = vx.path.bags.iter().any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok());
                if u == v || !inside {
                    return Err(DecompositionError::VortexEdge { piece, u, v });
                }
            }
        }
        let apex: BTreeSet<Vertex> = self.apices.iter().map(|a| a.0).collect();
        for &(a, _) in &self.apices {
            if pg.graph().contains(a) || owner.contains_key(&a) || apex.len() != self.apices.len() {
                return Err(DecompositionError::ApexPlacement { piece, v: a });
            }
        }
        let boundary = self.boundary();
        for &(u, v) in &self.apex_edges {
            if u == v || (!apex.contains(&u) && !apex.contains(&v)) {
                return Err(DecompositionError::ApexEdge { piece, u, v });
            }
            for (a, w) in [(u, v), (v, u)] {
                let restricted = self.apices.iter().any(|&(x, k)| x == a && k == ApexKind::Restricted);
                if restricted && pg.graph().contains(w) && boundary.binary_search(&w).is_err() {
                    return Err(DecompositionError::RestrictedApex { piece, apex: a, v: w });
                }
            }
        }
        Ok(())
    }
}

/// `seq` appears as consecutive entries of the cyclic `walk`, in either direction.
fn follows_walk(walk: &[Vertex], seq: &[Vertex]) -> bool {
    let m = walk.len();
    if seq.is_empty() || seq.len() > m {
        return false;
    }
    (0..m).any(|s| {
        seq.iter().enumerate().all(|(i, &v)| walk[(s + i) % m] == v)
            || seq.iter().enumerate().all(|(i, &v)| walk[(s + m - i % m) % m] == v)
    })
}

impl CliqueSumDecomposition {
    /// A single vortex-free, apex-free piece.
    pub fn single(pg: PlaneGraph) -> Self {
        CliqueSumDecomposition { pieces: vec![AlmostEmbeddedPiece::plane(pg)], sums: vec![] }
    }

    /// Union of the pieces with every dropped edge removed.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::default();
        for p in &self.pieces {
            g.union_with(&p.graph());
        }
        for s in &self.sums {
            for &(u, v) in &s.dropped {
                g.remove_edge(u, v);
            }
        }
        g
    }

    /// Vertices shared by piece `i` with some sum.
    pub fn shared_with(&self, i: usize) -> Vec<Vertex> {
        let mut out: Vec<Vertex> =
            self.sums.iter().filter(|s| s.a == i || s.b == i).flat_map(|s| s.shared.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn max_free_apices(&self) -> usize {
        self.pieces.iter().map(AlmostEmbeddedPiece::free_apices).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), DecompositionError> {
        let s = self.pieces.len();
        let graphs: Vec<Graph> = self.pieces.iter().map(AlmostEmbeddedPiece::graph).collect();
        for (i, p) in self.pieces.iter().enumerate() {
            p.validate(i)?;
        }
        let mut parent: Vec<usize> = (0..s).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        if self.sums.len() + 1 != s.max(1) {
            return Err(DecompositionError::SumTree { sum: self.sums.len() });
        }
        for (k, sum) in self.sums.iter().enumerate() {
            if sum.a >= s || sum.b >= s || sum.a == sum.b {
                return Err(DecompositionError::SumTree { sum: k });
            }
            let (ra, rb) = (find(&mut parent, sum.a), find(&mut parent, sum.b));
            if ra == rb {
                return Err(DecompositionError::SumTree { sum: k });
            }
            parent[ra] = rb;
            for piece in [sum.a, sum.b] {
                let g = &graphs[piece];
                if let Some(&v) = sum.shared.iter().find(|&&v| !g.contains(v)) {
                    return Err(DecompositionError::SharedMissing { sum: k, v, piece });
                }
                for (i, &u) in sum.shared.iter().enumerate() {
                    for &v in &sum.shared[i + 1..] {
                        if !g.has_edge(u, v) {
                            return Err(DecompositionError::NotClique { sum: k, u, v, piece });
                        }
                    }
                }
            }
            for &(u, v) in &sum.dropped {
                if u == v || !sum.shared.contains(&u) || !sum.shared.contains(&v) {
                    return Err(DecompositionError::DropNotShared { sum: k, u, v });
                }
            }
        }
        // pieces holding a vertex must be connected through sums sharing it
        let mut holders: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (i, g) in graphs.iter().enumerate() {
            for v in g.vertices() {
                holders.entry(v).or_default().push(i);
            }
        }
        for (v, ps) in holders {
            if ps.len() < 2 {
                continue;
            }
            let mut par: Vec<usize> = (0..s).collect();
            for sum in self.sums.iter().filter(|sm| sm.shared.contains(&v)) {
                let (ra, rb) = (find(&mut par, sum.a), find(&mut par, sum.b));
                par[ra] = rb;
            }
            let r = find(&mut par, ps[0]);
            if ps.iter().any(|&p| find(&mut par, p) != r) {
                return Err(DecompositionError::VertexSplit(v));
            }
        }
        Ok(())
    }
}

/// The two-piece instance on 15 vertices: a 3x3 grid with a depth-2 vortex on
/// its top row and one restricted apex, summed on a triangle with a planar piece.
pub fn two_piece_example() -> CliqueSumDecomposition {
    let grid = crate::plane::generate_grid(3, 3);
    let vortex = Vortex {
        path: VortexPathDecomposition::new(vec![vec![0, 9], vec![1, 9], vec![2, 9]], vec![0, 1, 2], 2),
        edges: vec![(9, 0), (9, 1), (9, 2)],
    };
    let p0 = AlmostEmbeddedPiece {
        embedded: grid,
        vortices: vec![vortex],
        apices: vec![(10, ApexKind::Restricted)],
        apex_edges: vec![(10, 9), (10, 0), (10, 1)],
    };
    // triangle 0 9 10 with a wheel-like fan on 11..14
    let rots = vec![
        (0, vec![9, 11, 14, 10]),
        (9, vec![10, 12, 11, 0]),
        (10, vec![0, 14, 13, 12, 9]),
        (11, vec![0, 9, 12, 14]),
        (12, vec![11, 9, 10, 13, 14]),
        (13, vec![12, 10, 14]),
        (14, vec![11, 12, 13, 10, 0]),
    ];
    let p1 = AlmostEmbeddedPiece::plane(PlaneGraph::from_rotations(rots).expect("piece 1 rotation"));
    CliqueSumDecomposition {
        pieces: vec![p0, p1],
        sums: vec![CliqueSum { a: 0, b: 1, shared: vec![0, 9, 10], dropped: vec![] }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::generate_grid;

    #[test]
    fn two_piece_example_is_valid() {
        let d = two_piece_example();
        d.validate().unwrap();
        assert_eq!(d.graph().num_vertices(), 15);
        assert_eq!(d.shared_with(0), vec![0, 9, 10]);
    }

    #[test]
    fn validation_failures() {
        let mut d = two_piece_example();
        d.pieces[0].apex_edges.push((10, 4));
        assert!(matches!(d.validate(), Err(DecompositionError::RestrictedApex { apex: 10, v: 4, .. })));

        let mut d = two_piece_example();
        let second = d.pieces[0].vortices[0].clone();
        d.pieces[0].vortices.push(second);
        assert!(matches!(d.validate(), Err(DecompositionError::Vortex { source: ComposeError::Overlap(_), .. })));

        let mut d = two_piece_example();
        d.pieces[0].vortices[0].path.boundary = vec![0, 4, 8];
        assert!(d.validate().is_err());

        let mut d = two_piece_example();
        d.sums[0].shared = vec![0, 9, 11];
        assert!(matches!(d.validate(), Err(DecompositionError::SharedMissing { .. })));

        let single = CliqueSumDecomposition::single(generate_grid(5, 5));
        single.validate().unwrap();
        assert_eq!(single.graph().num_edges(), 40);
    }
}
