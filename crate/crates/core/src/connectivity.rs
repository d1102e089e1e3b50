//! Exact vertex-connectivity test by unit-capacity flows (Even's scheme).

use crate::graph::{Graph, Vertex};
use std::collections::VecDeque;

/// True iff `g` has more than `c` vertices and no vertex cut of size `< c`.
pub fn vertex_connectivity_at_least(g: &Graph, c: usize) -> bool {
    let verts: Vec<Vertex> = g.vertices().collect();
    if verts.len() <= c {
        return false;
    }
    if c == 0 {
        return true;
    }
    // Any minimum cut misses one of the first c vertices; that vertex must be
    // c-linked to every later non-neighbor, and the first c pairwise likewise.
    for i in 0..c {
        let s = verts[i];
        for &t in &verts[i + 1..] {
            if !g.has_edge(s, t) && local_connectivity(g, s, t, c) < c {
                return false;
            }
        }
    }
    true
}

/// Number of internally disjoint `s`-`t` paths, counted up to `limit`.
pub fn local_connectivity(g: &Graph, s: Vertex, t: Vertex, limit: usize) -> usize {
    // split v into in = 2v, out = 2v+1
    let nb = g.id_bound();
    let nn = 2 * nb;
    let mut to = Vec::new();
    let mut cap = Vec::new();
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); nn];
    let mut add = |a: usize, b: usize, c: u32, to: &mut Vec<usize>, cap: &mut Vec<u32>| {
        head[a].push(to.len());
        to.push(b);
        cap.push(c);
        head[b].push(to.len());
        to.push(a);
        cap.push(0);
    };
    let big = u32::MAX / 2;
    for v in g.vertices() {
        let c = if v == s || v == t { big } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut to, &mut cap);
    }
    for (u, v) in g.edges() {
        add(2 * u + 1, 2 * v, big, &mut to, &mut cap);
        add(2 * v + 1, 2 * u, big, &mut to, &mut cap);
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    while flow < limit {
        let mut prev = vec![usize::MAX; nn];
        let mut seen = vec![false; nn];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == dst {
                break;
            }
            for &e in &head[x] {
                if cap[e] > 0 && !seen[to[e]] {
                    seen[to[e]] = true;
                    prev[to[e]] = e;
                    queue.push_back(to[e]);
                }
            }
        }
        if !seen[dst] {
            break;
        }
        let mut x = dst;
        while x != src {
            let e = prev[x];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            x = to[e ^ 1];
        }
        flow += 1;
    }
    flow
}
