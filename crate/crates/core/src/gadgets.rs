//! Gadgets on an ordered triple X whose extendable k-colorings of X form a
//! prescribed union of partition patterns.

use crate::coloring::{compute_phi, Color, ColorSet, ColoringError, ListAssignment};
use crate::connectivity::vertex_connectivity_at_least;
use crate::graph::{Graph, Vertex};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Equality pattern of an ordered triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Aaa,
    Aab,
    Aba,
    Abb,
    Abc,
}

impl Pattern {
    pub const ALL: [Pattern; 5] = [Pattern::Aaa, Pattern::Aab, Pattern::Aba, Pattern::Abb, Pattern::Abc];

    pub fn of(t: [Color; 3]) -> Pattern {
        match (t[0] == t[1], t[0] == t[2], t[1] == t[2]) {
            (true, true, _) => Pattern::Aaa,
            (true, false, _) => Pattern::Aab,
            (false, true, _) => Pattern::Aba,
            (false, false, true) => Pattern::Abb,
            (false, false, false) => Pattern::Abc,
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }

    pub fn name(self) -> &'static str {
        ["AAA", "AAB", "ABA", "ABB", "ABC"][self as usize]
    }

    pub fn parse(s: &str) -> Option<Pattern> {
        Pattern::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(s.trim()))
    }

    /// The single pattern removed by family `S_i`, `i` in `1..=5`.
    pub fn excluded_by(i: usize) -> Option<Pattern> {
        match i {
            1 => Some(Pattern::Aaa),
            2 => Some(Pattern::Abb),
            3 => Some(Pattern::Aba),
            4 => Some(Pattern::Aab),
            5 => Some(Pattern::Abc),
            _ => None,
        }
    }

    /// Inverse of `excluded_by`.
    pub fn family_index(self) -> usize {
        match self {
            Pattern::Aaa => 1,
            Pattern::Abb => 2,
            Pattern::Aba => 3,
            Pattern::Aab => 4,
            Pattern::Abc => 5,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Permutation-closed set of triples over `1..=k`, given by its allowed patterns.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PatternFamily {
    pub k: usize,
    allowed: u8,
}

impl PatternFamily {
    pub fn full(k: usize) -> Self {
        PatternFamily { k, allowed: 0b11111 }
    }

    pub fn new(k: usize, allowed: &[Pattern]) -> Self {
        PatternFamily { k, allowed: allowed.iter().fold(0, |m, p| m | p.bit()) }
    }

    pub fn excluding(k: usize, excluded: &[Pattern]) -> Self {
        let gone = excluded.iter().fold(0, |m, p| m | p.bit());
        PatternFamily { k, allowed: 0b11111 & !gone }
    }

    /// `S_0` for `i = 0`, otherwise `S_i`.
    pub fn s(i: usize, k: usize) -> Self {
        match Pattern::excluded_by(i) {
            Some(p) => Self::excluding(k, &[p]),
            None => Self::full(k),
        }
    }

    pub fn from_mask(k: usize, mask: u8) -> Self {
        PatternFamily { k, allowed: mask & 0b11111 }
    }

    pub fn mask(self) -> u8 {
        self.allowed
    }

    pub fn allows(self, p: Pattern) -> bool {
        self.allowed & p.bit() != 0
    }

    pub fn allowed(self) -> Vec<Pattern> {
        Pattern::ALL.into_iter().filter(|&p| self.allows(p)).collect()
    }

    pub fn excluded(self) -> Vec<Pattern> {
        Pattern::ALL.into_iter().filter(|&p| !self.allows(p)).collect()
    }

    pub fn intersect(self, o: PatternFamily) -> PatternFamily {
        assert_eq!(self.k, o.k);
        PatternFamily { k: self.k, allowed: self.allowed & o.allowed }
    }

    pub fn contains(self, t: [Color; 3]) -> bool {
        let k = self.k as Color;
        t.iter().all(|&c| (1..=k).contains(&c)) && self.allows(Pattern::of(t))
    }

    pub fn tuples(self) -> BTreeSet<Vec<Color>> {
        let k = self.k as Color;
        let mut out = BTreeSet::new();
        for a in 1..=k {
            for b in 1..=k {
                for c in 1..=k {
                    if self.allows(Pattern::of([a, b, c])) {
                        out.insert(vec![a, b, c]);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.allowed().iter().map(|p| p.name()).collect();
        write!(f, "PatternFamily(k={}, {{{}}})", self.k, names.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetInstance {
    pub graph: Graph,
    pub x: [Vertex; 3],
    pub k: usize,
    pub family: PatternFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("no base graph with at most {0} internal vertices realizes the family")]
    SearchFailed(usize),
    #[error("pattern gadget index {0} out of range 0..=5")]
    BadIndex(usize),
    #[error("k = {0} is below 3")]
    SmallK(usize),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("gadget mismatch: {} claimed tuples not extendable, {} extra extendable tuples, connectivity {}",
    missing.len(), extra.len(),
    connectivity_required.map_or("ok".to_string(), |c| format!("below required {c}")))]
pub struct GadgetMismatch {
    pub missing: Vec<Vec<Color>>,
    pub extra: Vec<Vec<Color>>,
    pub connectivity_required: Option<usize>,
}

/// Connectivity required of a gadget at palette `k`.
pub fn required_connectivity(k: usize) -> usize {
    k.saturating_sub(2).min(3)
}

/// Computes Φ with lists `{1..k}` and checks it equals the claimed family, then
/// checks `min(k-2, 3)`-connectivity.
pub fn verify_gadget(g: &GadgetInstance) -> Result<(), VerifyError> {
    let l = ListAssignment::uniform(&g.graph, ColorSet::range(g.k as Color));
    let phi = compute_phi(&g.graph, &l, &g.x)?;
    let want = g.family.tuples();
    let missing: Vec<_> = want.difference(&phi.members).cloned().collect();
    let extra: Vec<_> = phi.members.difference(&want).cloned().collect();
    let c = required_connectivity(g.k);
    let connectivity_required = (!vertex_connectivity_at_least(&g.graph, c)).then_some(c);
    if missing.is_empty() && extra.is_empty() && connectivity_required.is_none() {
        Ok(())
    } else {
        Err(VerifyError::Mismatch(GadgetMismatch { missing, extra, connectivity_required }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Mismatch(GadgetMismatch),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Base gadgets at k = 3, indexed by family `S_0..S_5`. X is `0, 1, 2`, the
/// internal vertices follow. Produced by `search_base_gadget`; a test replays
/// the search and compares.
pub const BASE_CATALOG: [(usize, &[(Vertex, Vertex)]); 6] = [
    (2, &[(0, 3), (0, 4), (1, 4), (2, 3)]),
    (3, &[(0, 5), (1, 4), (2, 3), (3, 4), (3, 5), (4, 5)]),
    (2, &[(0, 3), (0, 4), (1, 4), (2, 3), (3, 4)]),
    (2, &[(0, 4), (1, 3), (1, 4), (2, 3), (3, 4)]),
    (2, &[(0, 4), (1, 3), (2, 3), (2, 4), (3, 4)]),
    (1, &[(0, 3), (1, 3), (2, 3)]),
];

pub fn base_gadget(i: usize) -> Result<Graph, GadgetError> {
    let (m, edges) = BASE_CATALOG.get(i).ok_or(GadgetError::BadIndex(i))?;
    Ok(Graph::from_edges(3 + m, edges))
}

/// Φ of a small gadget at k = 3 by direct enumeration, as a pattern mask.
/// Internal vertices are `3..3 + m`; `adj` holds neighbor bitmasks.
fn phi_mask_k3(adj: &[u16]) -> u8 {
    let n = adj.len();
    let mut mask = 0u8;
    let mut col = vec![0u8; n];
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        for v in col.iter_mut() {
            *v = (c % 3) as u8;
            c /= 3;
        }
        let p = Pattern::of([col[0] + 1, col[1] + 1, col[2] + 1]);
        if mask & p.bit() != 0 {
            continue;
        }
        let proper = (0..n).all(|u| (0..n).all(|w| adj[u] >> w & 1 == 0 || col[u] != col[w]));
        if proper {
            mask |= p.bit();
        }
    }
    mask
}

/// Fewest internal vertices, then fewest edges, then smallest edge mask: the first
/// connected graph on X plus internal vertices whose k = 3 family equals `target`.
pub fn search_base_gadget(target: PatternFamily, max_internal: usize) -> Option<Graph> {
    for m in 0..=max_internal {
        let n = 3 + m;
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        if pairs.len() > 24 {
            return None;
        }
        let mut best: Option<(u32, u32)> = None;
        for emask in 0u32..(1 << pairs.len()) {
            let pc = emask.count_ones();
            if best.is_some_and(|(bp, _)| pc >= bp) || pc + 1 < n as u32 {
                continue;
            }
            let mut adj = vec![0u16; n];
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if emask >> i & 1 == 1 {
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                }
            }
            let mut reach = 1u16;
            loop {
                let next = (0..n).filter(|&u| reach >> u & 1 == 1).fold(reach, |r, u| r | adj[u]);
                if next == reach {
                    break;
                }
                reach = next;
            }
            if reach.count_ones() as usize != n {
                continue;
            }
            if phi_mask_k3(&adj) == target.mask() {
                best = Some((pc, emask));
            }
        }
        if let Some((_, emask)) = best {
            let edges: Vec<_> =
                pairs.iter().enumerate().filter(|(i, _)| emask >> i & 1 == 1).map(|(_, &e)| e).collect();
            return Some(Graph::from_edges(n, &edges));
        }
    }
    None
}

/// Base graph for `S_i` plus `k - 3` universal vertices.
pub fn make_pattern_gadget(i: usize, k: usize) -> Result<GadgetInstance, GadgetError> {
    if k < 3 {
        return Err(GadgetError::SmallK(k));
    }
    let mut g = base_gadget(i)?;
    for _ in 3..k {
        let u = g.add_vertex();
        for v in 0..u {
            g.add_edge(u, v);
        }
    }
    Ok(GadgetInstance { graph: g, x: [0, 1, 2], k, family: PatternFamily::s(i, k) })
}

/// Union of pattern gadgets, one per excluded pattern, glued on X by position.
/// The full family gets the base `S_0` gadget.
pub fn make_gadget(family: PatternFamily) -> Result<GadgetInstance, GadgetError> {
    let k = family.k;
    let excluded = family.excluded();
    if excluded.is_empty() {
        return make_pattern_gadget(0, k);
    }
    let mut idx: Vec<usize> = excluded.iter().map(|p| p.family_index()).collect();
    idx.sort_unstable();
    let mut g = Graph::new(3);
    for i in idx {
        let part = make_pattern_gadget(i, k)?;
        glue(&mut g, &part.graph, [0, 1, 2]);
    }
    Ok(GadgetInstance { graph: g, x: [0, 1, 2], k, family })
}

/// Copies `part` into `g`, mapping its vertices `0, 1, 2` to `at` and the rest to
/// fresh ids. Returns the fresh ids in order.
pub fn glue(g: &mut Graph, part: &Graph, at: [Vertex; 3]) -> Vec<Vertex> {
    let mut map = vec![usize::MAX; part.id_bound()];
    map[..3].copy_from_slice(&at);
    let mut fresh = Vec::new();
    for v in part.vertices().filter(|&v| v >= 3) {
        map[v] = g.add_vertex();
        fresh.push(map[v]);
    }
    for (u, v) in part.edges() {
        g.add_edge(map[u], map[v]);
    }
    fresh
}

/// The gadget with the three X-X edges added, if that leaves its family unchanged.
pub fn close_x_triangle(g: &GadgetInstance) -> Result<Option<GadgetInstance>, GadgetError> {
    let mut closed = g.clone();
    closed.graph.add_edge(g.x[0], g.x[1]);
    closed.graph.add_edge(g.x[0], g.x[2]);
    closed.graph.add_edge(g.x[1], g.x[2]);
    match verify_gadget(&closed) {
        Ok(()) => Ok(Some(closed)),
        Err(VerifyError::Mismatch(_)) => Ok(None),
        Err(VerifyError::Coloring(e)) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_x_critical;

    #[test]
    fn pattern_classification() {
        assert_eq!(Pattern::of([2, 2, 2]), Pattern::Aaa);
        assert_eq!(Pattern::of([1, 1, 3]), Pattern::Aab);
        assert_eq!(Pattern::of([1, 3, 1]), Pattern::Aba);
        assert_eq!(Pattern::of([3, 1, 1]), Pattern::Abb);
        assert_eq!(Pattern::of([1, 2, 3]), Pattern::Abc);
        assert_eq!(PatternFamily::full(3).tuples().len(), 27);
        assert_eq!(PatternFamily::full(5).tuples().len(), 125);
        let s15 = PatternFamily::s(1, 3).intersect(PatternFamily::s(5, 3));
        assert_eq!(s15.tuples().len(), 18);
    }

    #[test]
    fn intersection_algebra() {
        for a in 0..32u8 {
            for b in 0..32u8 {
                let (fa, fb) = (PatternFamily::from_mask(4, a), PatternFamily::from_mask(4, b));
                let want: BTreeSet<_> = fa.tuples().intersection(&fb.tuples()).cloned().collect();
                assert_eq!(fa.intersect(fb).tuples(), want);
            }
        }
    }

    #[test]
    fn catalog_replays_search() {
        for i in 0..6 {
            let found = search_base_gadget(PatternFamily::s(i, 3), 3).expect("base gadget");
            assert_eq!(found, base_gadget(i).unwrap(), "S_{i}");
        }
    }

    #[test]
    fn pattern_gadgets_verify() {
        for i in 0..6 {
            for k in 3..=5 {
                verify_gadget(&make_pattern_gadget(i, k).unwrap()).unwrap();
            }
        }
        let g1 = make_pattern_gadget(1, 5).unwrap();
        assert!(vertex_connectivity_at_least(&g1.graph, 3));
        let g5 = make_pattern_gadget(5, 3).unwrap();
        let l = ListAssignment::uniform(&g5.graph, ColorSet::range(3));
        let phi = compute_phi(&g5.graph, &l, &g5.x).unwrap();
        assert!(phi.members.iter().all(|t| Pattern::of([t[0], t[1], t[2]]) != Pattern::Abc));
    }

    #[test]
    fn verify_examples() {
        let tri = GadgetInstance {
            graph: Graph::complete(3),
            x: [0, 1, 2],
            k: 3,
            family: PatternFamily::new(3, &[Pattern::Abc]),
        };
        assert_eq!(verify_gadget(&tri), Ok(()));
        let wrong = GadgetInstance { family: PatternFamily::full(3), ..tri.clone() };
        match verify_gadget(&wrong) {
            Err(VerifyError::Mismatch(m)) => assert_eq!(m.missing.len(), 21),
            other => panic!("{other:?}"),
        }
        let loose = GadgetInstance { graph: Graph::new(3), x: [0, 1, 2], k: 3, family: PatternFamily::full(3) };
        match verify_gadget(&loose) {
            Err(VerifyError::Mismatch(m)) => {
                assert!(m.missing.is_empty() && m.extra.is_empty());
                assert_eq!(m.connectivity_required, Some(1));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gadget_examples() {
        let full5 = make_gadget(PatternFamily::full(5)).unwrap();
        verify_gadget(&full5).unwrap();
        let s15 = PatternFamily::s(1, 3).intersect(PatternFamily::s(5, 3));
        verify_gadget(&make_gadget(s15).unwrap()).unwrap();
        let none = make_gadget(PatternFamily::from_mask(3, 0)).unwrap();
        let l = ListAssignment::uniform(&none.graph, ColorSet::range(3));
        assert!(compute_phi(&none.graph, &l, &none.x).unwrap().members.is_empty());
    }

    #[test]
    fn critical_gadgets_are_small() {
        for i in 0..6 {
            let g = base_gadget(i).unwrap();
            let l = ListAssignment::uniform(&g, ColorSet::range(3));
            if is_x_critical(&g, &l, &[0, 1, 2]).unwrap() {
                assert!(g.num_vertices() <= 29 * 3);
            }
        }
    }

    #[test]
    fn triangle_closure_changes_repeated_families() {
        for i in 0..6 {
            let g = make_pattern_gadget(i, 3).unwrap();
            assert!(close_x_triangle(&g).unwrap().is_none());
        }
        let rainbow = GadgetInstance {
            graph: Graph::complete(3),
            x: [0, 1, 2],
            k: 3,
            family: PatternFamily::new(3, &[Pattern::Abc]),
        };
        assert!(close_x_triangle(&rainbow).unwrap().is_some());
    }
}
