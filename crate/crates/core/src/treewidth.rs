//! Tree decompositions: validation, construction by elimination orderings, and the
//! vortex, clique-sum and apex compositions.

use crate::graph::{Graph, Vertex};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted vertex sets, one per node.
    pub bags: Vec<Vec<Vertex>>,
    /// Undirected tree edges between node indices.
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdViolation {
    #[error("tree edge ({0}, {1}) refers to a missing node")]
    BadNode(usize, usize),
    #[error("decomposition graph is not a tree")]
    NotATree,
    #[error("bag {node} contains vertex {v} which is not in the graph")]
    UnknownVertex { node: usize, v: Vertex },
    #[error("vertex {0} is in no bag")]
    MissingVertex(Vertex),
    #[error("bags containing vertex {0} do not form a connected subtree")]
    DisconnectedTrace(Vertex),
    #[error("edge {0}-{1} is not contained in any bag")]
    UncoveredEdge(Vertex, Vertex),
}

/// Checks both decomposition axioms and tree-ness; returns the width.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<usize, TdViolation> {
    let n = td.bags.len();
    for &(a, b) in &td.edges {
        if a >= n || b >= n || a == b {
            return Err(TdViolation::BadNode(a, b));
        }
    }
    if n == 0 {
        return match g.vertices().next() {
            Some(v) => Err(TdViolation::MissingVertex(v)),
            None => Ok(0),
        };
    }
    let adj = td.adjacency();
    if td.edges.len() != n - 1 || !tree_connected(&adj, |_| true).0 {
        return Err(TdViolation::NotATree);
    }
    let bound = g.id_bound();
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); bound];
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if !g.contains(v) {
                return Err(TdViolation::UnknownVertex { node: x, v });
            }
            occ[v].push(x);
        }
    }
    let mut mark = vec![false; n];
    for v in g.vertices() {
        let nodes = &occ[v];
        if nodes.is_empty() {
            return Err(TdViolation::MissingVertex(v));
        }
        for &x in nodes {
            mark[x] = true;
        }
        let (ok, _) = tree_connected_from(&adj, nodes[0], |x| mark[x], nodes.len());
        for &x in nodes {
            mark[x] = false;
        }
        if !ok {
            return Err(TdViolation::DisconnectedTrace(v));
        }
    }
    for (u, v) in g.edges() {
        let (a, b) = if occ[u].len() <= occ[v].len() { (u, v) } else { (v, u) };
        if !occ[a].iter().any(|&x| td.bags[x].binary_search(&b).is_ok()) {
            return Err(TdViolation::UncoveredEdge(u, v));
        }
    }
    Ok(td.width())
}

fn tree_connected(adj: &[Vec<usize>], keep: impl Fn(usize) -> bool) -> (bool, usize) {
    let total = (0..adj.len()).filter(|&x| keep(x)).count();
    match (0..adj.len()).find(|&x| keep(x)) {
        Some(s) => tree_connected_from(adj, s, keep, total),
        None => (true, 0),
    }
}

fn tree_connected_from(
    adj: &[Vec<usize>],
    s: usize,
    keep: impl Fn(usize) -> bool,
    total: usize,
) -> (bool, usize) {
    let mut seen = BTreeSet::from([s]);
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if keep(y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    (seen.len() == total, seen.len())
}

/// Decomposition induced by eliminating vertices in `order` (all vertices of `g`).
pub fn decomposition_from_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let bound = g.id_bound();
    let mut pos = vec![usize::MAX; bound];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> =
        (0..bound).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(order.len());
    let mut parent_vertex = Vec::with_capacity(order.len());
    for &v in order {
        let later: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in later.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent_vertex.push(later.iter().copied().min_by_key(|&u| pos[u]));
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, p) in parent_vertex.iter().enumerate() {
        match p {
            Some(u) => edges.push((i, pos[*u])),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    compress(TreeDecomposition { bags, edges })
}

/// Contracts tree edges whose one bag contains the other.
fn compress(td: TreeDecomposition) -> TreeDecomposition {
    let n = td.bags.len();
    if n <= 1 {
        return td;
    }
    let mut bags = td.bags;
    let mut alive = vec![true; n];
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(a, b) in &td.edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let subset = |a: &[Vertex], b: &[Vertex]| a.iter().all(|v| b.binary_search(v).is_ok());
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            if !alive[a] {
                continue;
            }
            let nbrs: Vec<usize> = adj[a].iter().copied().collect();
            if let Some(&b) = nbrs.iter().find(|&&b| subset(&bags[a], &bags[b])) {
                // fold a into b
                for &c in &nbrs {
                    adj[c].remove(&a);
                    if c != b {
                        adj[c].insert(b);
                        adj[b].insert(c);
                    }
                }
                adj[a].clear();
                alive[a] = false;
                bags[a].clear();
                changed = true;
            }
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut out_bags = Vec::new();
    for a in 0..n {
        if alive[a] {
            index[a] = out_bags.len();
            out_bags.push(std::mem::take(&mut bags[a]));
        }
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for &b in &adj[a] {
            if a < b {
                edges.push((index[a], index[b]));
            }
        }
    }
    edges.sort_unstable();
    TreeDecomposition { bags: out_bags, edges }
}

/// Greedy min-fill elimination ordering; ties broken by degree, then id.
pub fn min_fill_order(g: &Graph) -> Vec<Vertex> {
    let bound = g.id_bound();
    let mut adj: Vec<BTreeSet<Vertex>> =
        (0..bound).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let fill = |adj: &[BTreeSet<Vertex>], v: Vertex| -> usize {
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut key = vec![(0usize, 0usize); bound];
    let mut queue = BTreeSet::new();
    for v in g.vertices() {
        key[v] = (fill(&adj, v), adj[v].len());
        queue.insert((key[v].0, key[v].1, v));
    }
    let mut order = Vec::with_capacity(g.num_vertices());
    let mut gone = vec![false; bound];
    while let Some((_, _, v)) = queue.pop_first() {
        order.push(v);
        gone[v] = true;
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        let mut touched: BTreeSet<Vertex> = nb.iter().copied().collect();
        for &a in &nb {
            touched.extend(adj[a].iter().copied());
        }
        for u in touched {
            if gone[u] {
                continue;
            }
            let nk = (fill(&adj, u), adj[u].len());
            if nk != key[u] {
                queue.remove(&(key[u].0, key[u].1, u));
                key[u] = nk;
                queue.insert((nk.0, nk.1, u));
            }
        }
    }
    order
}

pub fn min_degree_order(g: &Graph) -> Vec<Vertex> {
    let bound = g.id_bound();
    let mut adj: Vec<BTreeSet<Vertex>> =
        (0..bound).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut queue: BTreeSet<(usize, Vertex)> = g.vertices().map(|v| (adj[v].len(), v)).collect();
    let mut order = Vec::with_capacity(g.num_vertices());
    while let Some((_, v)) = queue.pop_first() {
        order.push(v);
        let nb: Vec<Vertex> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &a in &nb {
            queue.remove(&(adj[a].len(), a));
            adj[a].remove(&v);
            adj[a].extend(nb.iter().copied().filter(|&b| b != a));
            queue.insert((adj[a].len(), a));
        }
    }
    order
}

/// Per component, BFS from a pseudo-peripheral vertex (two sweeps).
pub fn bfs_sweep_order(g: &Graph) -> Vec<Vertex> {
    let bfs = |s: Vertex| -> Vec<Vertex> {
        let mut seen = vec![false; g.id_bound()];
        seen[s] = true;
        let mut out = vec![s];
        let mut i = 0;
        while i < out.len() {
            for &u in g.neighbors(out[i]) {
                if !seen[u] {
                    seen[u] = true;
                    out.push(u);
                }
            }
            i += 1;
        }
        out
    };
    let mut order = Vec::with_capacity(g.num_vertices());
    for comp in g.components() {
        let far = *bfs(comp[0]).last().unwrap();
        order.extend(bfs(far));
    }
    order
}

/// Narrowest of min-fill, min-degree and BFS-sweep elimination.
pub fn heuristic_decompose(g: &Graph) -> TreeDecomposition {
    [min_fill_order(g), min_degree_order(g), bfs_sweep_order(g)]
        .iter()
        .map(|o| decomposition_from_order(g, o))
        .min_by_key(|td| td.width())
        .unwrap()
}

/// Exact treewidth by dynamic programming over vertex subsets. Only for tiny graphs.
pub fn exact_order(g: &Graph) -> (usize, Vec<Vertex>) {
    let verts: Vec<Vertex> = g.vertices().collect();
    let n = verts.len();
    assert!(n <= 20, "exact treewidth limited to 20 vertices");
    if n == 0 {
        return (0, vec![]);
    }
    let nbr: Vec<u32> = verts
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .fold(0u32, |m, u| m | 1 << verts.binary_search(u).unwrap())
        })
        .collect();
    // vertices outside s + {v} adjacent to the part of s reachable from v
    let q = |s: u32, v: usize| -> u32 {
        let mut comp = 1u32 << v;
        let mut frontier = comp;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= nbr[i] & s & !comp;
            }
            comp |= next;
            frontier = next;
        }
        let mut out = 0;
        let mut c = comp;
        while c != 0 {
            let i = c.trailing_zeros() as usize;
            c &= c - 1;
            out |= nbr[i];
        }
        (out & !comp & !s).count_ones()
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut tw = vec![u8::MAX; 1 << n];
    let mut best = vec![0u8; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let cand = tw[rest as usize].max(q(rest, v) as u8);
            if cand < tw[s as usize] {
                tw[s as usize] = cand;
                best[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = best[s as usize] as usize;
        order.push(verts[v]);
        s &= !(1 << v);
    }
    order.reverse();
    (tw[full as usize] as usize, order)
}

/// Exact decomposition up to 12 vertices, min-fill above.
pub fn decompose(g: &Graph) -> TreeDecomposition {
    if g.num_vertices() <= 12 {
        decomposition_from_order(g, &exact_order(g).1)
    } else {
        heuristic_decompose(g)
    }
}

/// Path decomposition of a vortex: bag `i` contains boundary vertex `boundary[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VortexPathDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub boundary: Vec<Vertex>,
    /// Declared depth bound.
    pub depth: usize,
}

impl VortexPathDecomposition {
    pub fn new(bags: Vec<Vec<Vertex>>, boundary: Vec<Vertex>, depth: usize) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        VortexPathDecomposition { bags, boundary, depth }
    }

    pub fn actual_depth(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.bags.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn validate(&self) -> Result<(), ComposeError> {
        if self.bags.len() != self.boundary.len() || self.bags.is_empty() {
            return Err(ComposeError::VortexShape);
        }
        let mut b = self.boundary.clone();
        b.sort_unstable();
        b.dedup();
        if b.len() != self.boundary.len() {
            return Err(ComposeError::VortexShape);
        }
        for (i, &v) in self.boundary.iter().enumerate() {
            if self.bags[i].binary_search(&v).is_err() {
                return Err(ComposeError::BoundaryNotInBag(v));
            }
        }
        for v in self.vertices() {
            let idx: Vec<usize> =
                (0..self.bags.len()).filter(|&i| self.bags[i].binary_search(&v).is_ok()).collect();
            if idx.last().unwrap() - idx[0] + 1 != idx.len() {
                return Err(ComposeError::NotContiguous(v));
            }
        }
        if self.actual_depth() > self.depth {
            return Err(ComposeError::TooDeep { declared: self.depth, actual: self.actual_depth() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("vortex needs one distinct boundary vertex per bag")]
    VortexShape,
    #[error("boundary vertex {0} is missing from its bag")]
    BoundaryNotInBag(Vertex),
    #[error("vortex vertex {0} occupies non-consecutive bags")]
    NotContiguous(Vertex),
    #[error("vortex depth {actual} exceeds declared {declared}")]
    TooDeep { declared: usize, actual: usize },
    #[error("vortex boundary {0}-{1} is not a path edge of the embedded part")]
    BoundaryNotPath(Vertex, Vertex),
    #[error("boundary vertex {0} is not in the embedded part")]
    BoundaryMissing(Vertex),
    #[error("internal vortex vertex {0} also lies in the embedded part")]
    InternalEmbedded(Vertex),
    #[error("vortices overlap at vertex {0}")]
    Overlap(Vertex),
    #[error("sum tree over pieces is not a tree")]
    SumTree,
    #[error("shared set {0:?} is not contained in any bag of piece {1}")]
    SharedNotInBag(Vec<Vertex>, usize),
}

/// Replaces each vertex `v` in each bag by the vortex bag of `v` (or `{v}`).
pub fn vortex_compose(
    g0: &Graph,
    td0: &TreeDecomposition,
    vortices: &[VortexPathDecomposition],
) -> Result<TreeDecomposition, ComposeError> {
    let mut owner = std::collections::BTreeMap::new();
    let mut xmap: std::collections::BTreeMap<Vertex, &[Vertex]> = Default::default();
    for (i, vx) in vortices.iter().enumerate() {
        vx.validate()?;
        for w in vx.boundary.windows(2) {
            if !g0.has_edge(w[0], w[1]) {
                return Err(ComposeError::BoundaryNotPath(w[0], w[1]));
            }
        }
        for (j, &v) in vx.boundary.iter().enumerate() {
            if !g0.contains(v) {
                return Err(ComposeError::BoundaryMissing(v));
            }
            xmap.insert(v, &vx.bags[j]);
        }
        for v in vx.vertices() {
            if owner.insert(v, i).is_some() {
                return Err(ComposeError::Overlap(v));
            }
            if g0.contains(v) && !vx.boundary.contains(&v) {
                return Err(ComposeError::InternalEmbedded(v));
            }
        }
    }
    let bags = td0
        .bags
        .iter()
        .map(|bag| {
            let mut nb: Vec<Vertex> = bag
                .iter()
                .flat_map(|v| xmap.get(v).map_or_else(|| vec![*v], |x| x.to_vec()))
                .collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    Ok(TreeDecomposition { bags, edges: td0.edges.clone() })
}

/// Joins piece decompositions along the sum tree. Each sum `(p, q, shared)` links the
/// lexicographically least bag of `p` containing `shared` to that of `q`.
pub fn cliquesum_compose(
    tds: &[TreeDecomposition],
    sums: &[(usize, usize, Vec<Vertex>)],
) -> Result<TreeDecomposition, ComposeError> {
    let s = tds.len();
    if s == 0 {
        return Ok(TreeDecomposition::default());
    }
    if sums.len() != s - 1 {
        return Err(ComposeError::SumTree);
    }
    let mut adj = vec![Vec::new(); s];
    for &(p, q, _) in sums {
        if p >= s || q >= s || p == q {
            return Err(ComposeError::SumTree);
        }
        adj[p].push(q);
        adj[q].push(p);
    }
    if !tree_connected(&adj, |_| true).0 {
        return Err(ComposeError::SumTree);
    }
    let mut offset = vec![0; s + 1];
    for i in 0..s {
        offset[i + 1] = offset[i] + tds[i].bags.len();
    }
    let mut out = TreeDecomposition::default();
    for (i, td) in tds.iter().enumerate() {
        out.bags.extend(td.bags.iter().cloned());
        out.edges.extend(td.edges.iter().map(|&(a, b)| (a + offset[i], b + offset[i])));
    }
    let pick = |piece: usize, shared: &[Vertex]| -> Result<usize, ComposeError> {
        let mut sh = shared.to_vec();
        sh.sort_unstable();
        tds[piece]
            .bags
            .iter()
            .enumerate()
            .filter(|(_, b)| sh.iter().all(|v| b.binary_search(v).is_ok()))
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i + offset[piece])
            .ok_or_else(|| ComposeError::SharedNotInBag(sh.clone(), piece))
    };
    for (p, q, shared) in sums {
        let a = pick(*p, shared)?;
        let b = pick(*q, shared)?;
        out.edges.push((a, b));
    }
    Ok(out)
}

/// Adds `a` to every bag.
pub fn apex_augment(td: &TreeDecomposition, a: &[Vertex]) -> TreeDecomposition {
    if a.is_empty() {
        return td.clone();
    }
    if td.bags.is_empty() {
        return TreeDecomposition::new(vec![a.to_vec()], vec![]);
    }
    let bags = td
        .bags
        .iter()
        .map(|b| {
            let mut nb: Vec<Vertex> = b.iter().chain(a).copied().collect();
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    TreeDecomposition { bags, edges: td.edges.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::{generate_grid, generate_random_planar};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validate_examples() {
        let p = Graph::path(4);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate_td(&p, &td), Ok(1));
        let k4 = Graph::complete(4);
        assert_eq!(validate_td(&k4, &TreeDecomposition::new(vec![vec![0, 1, 2, 3]], vec![])), Ok(3));
        let c4 = Graph::cycle(4);
        let bad = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
        assert_eq!(validate_td(&c4, &bad), Err(TdViolation::UncoveredEdge(0, 3)));
        let gap = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3, 0]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate_td(&p, &gap), Err(TdViolation::DisconnectedTrace(0)));
    }

    fn brute_tw(g: &Graph) -> usize {
        // minimum over all elimination orders
        fn perms(v: &mut Vec<Vertex>, k: usize, out: &mut Vec<Vec<Vertex>>) {
            if k == v.len() {
                out.push(v.clone());
                return;
            }
            for i in k..v.len() {
                v.swap(k, i);
                perms(v, k + 1, out);
                v.swap(k, i);
            }
        }
        let mut all = Vec::new();
        perms(&mut g.vertices().collect(), 0, &mut all);
        all.iter().map(|o| decomposition_from_order(g, o).width()).min().unwrap_or(0)
    }

    #[test]
    fn heuristic_basics() {
        let t = Graph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]);
        assert_eq!(heuristic_decompose(&t).width(), 1);
        assert_eq!(heuristic_decompose(&Graph::complete(5)).width(), 4);
        let grid = generate_grid(5, 5).into_graph();
        let td = heuristic_decompose(&grid);
        validate_td(&grid, &td).unwrap();
        assert_eq!(td.width(), 5);
        assert!(treewidth_at_most(&grid, 5) && !treewidth_at_most(&grid, 4));
    }

    /// Memoized search for an elimination ordering of width <= k.
    fn treewidth_at_most(g: &Graph, k: usize) -> bool {
        let verts: Vec<Vertex> = g.vertices().collect();
        let nbr: Vec<u64> = verts
            .iter()
            .map(|v| g.neighbors(*v).iter().fold(0u64, |m, u| m | 1 << verts.binary_search(u).unwrap()))
            .collect();
        fn q(nbr: &[u64], s: u64, v: usize) -> u32 {
            let mut comp = 1u64 << v;
            loop {
                let mut next = comp;
                for i in 0..nbr.len() {
                    if comp >> i & 1 == 1 {
                        next |= nbr[i] & s;
                    }
                }
                if next == comp {
                    break;
                }
                comp = next;
            }
            let out = (0..nbr.len()).filter(|&i| comp >> i & 1 == 1).fold(0, |m, i| m | nbr[i]);
            (out & !comp & !s).count_ones()
        }
        let full = (1u64 << verts.len()) - 1;
        let mut failed = std::collections::HashSet::new();
        fn go(s: u64, full: u64, k: u32, nbr: &[u64], failed: &mut std::collections::HashSet<u64>) -> bool {
            if s == full {
                return true;
            }
            if failed.contains(&s) {
                return false;
            }
            for v in 0..nbr.len() {
                if s >> v & 1 == 0 && q(nbr, s, v) <= k && go(s | 1 << v, full, k, nbr, failed) {
                    return true;
                }
            }
            failed.insert(s);
            false
        }
        go(0, full, k as u32, &nbr, &mut failed)
    }

    #[test]
    fn exact_matches_permutation_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.random_range(1..=7);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.45) {
                        g.add_edge(u, v);
                    }
                }
            }
            let (w, order) = exact_order(&g);
            assert_eq!(w, brute_tw(&g));
            let td = decomposition_from_order(&g, &order);
            assert_eq!(validate_td(&g, &td), Ok(w));
        }
    }

    #[test]
    fn heuristic_close_to_exact_on_small_graphs() {
        for seed in 0..150u64 {
            let n = 2 + (seed % 8) as usize;
            let g = generate_random_planar(n, seed).into_graph();
            let td = heuristic_decompose(&g);
            let w = validate_td(&g, &td).unwrap();
            let exact = exact_order(&g).0;
            assert!(w >= exact && w <= exact + 2);
            assert_eq!(validate_td(&g, &decompose(&g)), Ok(exact));
        }
    }

    #[test]
    fn vortex_example() {
        let g0 = Graph::path(3);
        let td0 = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let vx = VortexPathDecomposition::new(vec![vec![0, 3], vec![1, 3], vec![2, 3]], vec![0, 1, 2], 2);
        let td = vortex_compose(&g0, &td0, &[vx]).unwrap();
        let mut g = g0.clone();
        for v in 0..3 {
            g.add_edge(v, 3);
        }
        let w = validate_td(&g, &td).unwrap();
        assert!(w <= 3);
        assert_eq!(vortex_compose(&g0, &td0, &[]).unwrap(), td0);
        let flat = VortexPathDecomposition::new(vec![vec![0], vec![1], vec![2]], vec![0, 1, 2], 1);
        assert_eq!(vortex_compose(&g0, &td0, &[flat]).unwrap().width(), 1);
        let broken = VortexPathDecomposition::new(vec![vec![0], vec![2]], vec![0, 2], 1);
        assert_eq!(vortex_compose(&g0, &td0, &[broken]), Err(ComposeError::BoundaryNotPath(0, 2)));
    }

    #[test]
    fn clique_sum_of_two_k4() {
        let a = TreeDecomposition::new(vec![vec![0, 1, 2, 3]], vec![]);
        let b = TreeDecomposition::new(vec![vec![1, 2, 3, 4]], vec![]);
        let td = cliquesum_compose(&[a.clone(), b], &[(0, 1, vec![1, 2, 3])]).unwrap();
        let mut g = Graph::complete(4);
        for v in 1..4 {
            g.add_edge(v, 4);
        }
        assert_eq!(validate_td(&g, &td), Ok(3));
        assert_eq!(cliquesum_compose(&[a.clone()], &[]).unwrap(), a);
    }

    #[test]
    fn apex_examples() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(apex_augment(&td, &[]), td);
        let aug = apex_augment(&td, &[7, 8]);
        assert_eq!(aug.width(), 3);
        let mut g = Graph::path(3);
        for a in [7, 8] {
            for v in 0..3 {
                g.add_edge(a, v);
            }
        }
        g.add_edge(7, 8);
        assert_eq!(validate_td(&g, &aug), Ok(3));
    }
}
