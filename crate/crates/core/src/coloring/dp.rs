//! Dynamic programming over a tree decomposition.
//!
//! Each node keeps the sorted set of proper list colorings of its bag that
//! extend to the subtree below it. A coloring of a bag is encoded as packed
//! bit fields of list positions. A node is built by taking the projections of its
//! children's tables onto the shared vertices, seeding from the child with the
//! largest overlap, and extending vertex by vertex while probing the other
//! projections as soon as their shared vertices are fixed.

use super::{Color, Coloring, ColoringError, ListAssignment};
use crate::graph::{Graph, Vertex};
use crate::treewidth::{decompose, validate_td, TreeDecomposition};
use serde::Serialize;
use std::collections::VecDeque;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DpStats {
    pub nodes: usize,
    pub width: usize,
    /// Candidate colors tried over all nodes.
    pub work: u64,
    pub max_table: usize,
    pub total_entries: u64,
}

pub fn dp_list_color(
    g: &Graph,
    l: &ListAssignment,
    td: &TreeDecomposition,
) -> Result<Option<Coloring>, ColoringError> {
    dp_list_color_stats(g, l, td).map(|(c, _)| c)
}

/// Colors `g` with a decomposition from `decompose`.
pub fn list_color(g: &Graph, l: &ListAssignment) -> Result<Option<Coloring>, ColoringError> {
    dp_list_color(g, l, &decompose(g))
}

struct Node {
    bag: Vec<Vertex>,
    shift: Vec<u32>,
    table: Vec<u64>,
}

impl Node {
    fn digit(&self, code: u64, pos: usize, lists: &[Vec<Color>]) -> usize {
        ((code >> self.shift[pos]) & ((1 << bits(lists[self.bag[pos]].len())) - 1)) as usize
    }
}

fn bits(len: usize) -> u32 {
    usize::BITS - (len.max(2) - 1).leading_zeros()
}

pub fn dp_list_color_stats(
    g: &Graph,
    l: &ListAssignment,
    td: &TreeDecomposition,
) -> Result<(Option<Coloring>, DpStats), ColoringError> {
    let width = validate_td(g, td)?;
    let mut stats = DpStats { nodes: td.num_nodes(), width, ..Default::default() };
    if g.num_vertices() == 0 {
        return Ok((Some(Coloring::default()), stats));
    }
    let mut lists: Vec<Vec<Color>> = vec![Vec::new(); g.id_bound()];
    for v in g.vertices() {
        lists[v] = l.get(v).iter().collect();
        if lists[v].is_empty() {
            return Ok((None, stats));
        }
    }
    let n = td.num_nodes();
    let adj = td.adjacency();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut q = VecDeque::from([0]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                order.push(y);
                q.push_back(y);
            }
        }
    }
    let mut children = vec![Vec::new(); n];
    for &x in &order[1..] {
        children[parent[x]].push(x);
    }

    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    for (x, bag) in td.bags.iter().enumerate() {
        let mut shift = Vec::with_capacity(bag.len());
        let mut total = 0;
        for &v in bag {
            shift.push(total);
            total += bits(lists[v].len());
        }
        if total > 64 {
            return Err(ColoringError::TooWide(x));
        }
        nodes.push(Node { bag: bag.clone(), shift, table: Vec::new() });
    }

    for &x in order.iter().rev() {
        let table = build_table(x, &children[x], &nodes, g, &lists, &mut stats)?;
        stats.max_table = stats.max_table.max(table.len());
        stats.total_entries += table.len() as u64;
        if table.is_empty() {
            return Ok((None, stats));
        }
        nodes[x].table = table;
    }

    // top-down: first entry at the root, then the first consistent entry per child
    let mut color_idx: Vec<Option<usize>> = vec![None; g.id_bound()];
    for &x in &order {
        let node = &nodes[x];
        let code = *node
            .table
            .iter()
            .find(|&&c| {
                (0..node.bag.len()).all(|p| match color_idx[node.bag[p]] {
                    Some(i) => node.digit(c, p, &lists) == i,
                    None => true,
                })
            })
            .expect("child table holds an entry consistent with its parent");
        for p in 0..node.bag.len() {
            color_idx[node.bag[p]] = Some(node.digit(code, p, &lists));
        }
    }
    let coloring = Coloring(g.vertices().map(|v| (v, lists[v][color_idx[v].unwrap()])).collect());
    Ok((Some(coloring), stats))
}

struct ChildView {
    /// positions in the parent's bag of the shared vertices
    ppos: Vec<usize>,
    proj: Vec<u64>,
    shift: Vec<u32>,
}

impl ChildView {
    fn key(&self, assign: &[usize]) -> u64 {
        self.ppos.iter().zip(&self.shift).fold(0, |code, (&p, &s)| code | (assign[p] as u64) << s)
    }
}

fn build_table(
    x: usize,
    kids: &[usize],
    nodes: &[Node],
    g: &Graph,
    lists: &[Vec<Color>],
    stats: &mut DpStats,
) -> Result<Vec<u64>, ColoringError> {
    let node = &nodes[x];
    let bag = &node.bag;
    let k = bag.len();
    let mut views: Vec<ChildView> = Vec::with_capacity(kids.len());
    for &c in kids {
        let child = &nodes[c];
        let mut ppos = Vec::new();
        let mut cpos = Vec::new();
        for (p, v) in bag.iter().enumerate() {
            if let Ok(q) = child.bag.binary_search(v) {
                ppos.push(p);
                cpos.push(q);
            }
        }
        // keys use the parent's bit layout restricted to the shared positions
        let shift: Vec<u32> = ppos.iter().map(|&p| node.shift[p]).collect();
        let moves: Vec<(u32, u64, u32)> = cpos
            .iter()
            .zip(&shift)
            .map(|(&q, &s)| (child.shift[q], (1u64 << bits(lists[child.bag[q]].len())) - 1, s))
            .collect();
        let mut proj: Vec<u64> = child
            .table
            .iter()
            .map(|&code| moves.iter().fold(0, |key, &(from, mask, to)| key | ((code >> from) & mask) << to))
            .collect();
        proj.sort_unstable();
        proj.dedup();
        views.push(ChildView { ppos, proj, shift });
    }
    views.sort_by_key(|v| std::cmp::Reverse(v.ppos.len()));

    // assignment order: seed child's shared vertices, then other shared, then the rest
    let mut placed = vec![false; k];
    let mut seq: Vec<usize> = Vec::with_capacity(k);
    for v in &views {
        for &p in &v.ppos {
            if !placed[p] {
                placed[p] = true;
                seq.push(p);
            }
        }
    }
    for p in 0..k {
        if !placed[p] {
            seq.push(p);
        }
    }
    let seed_len = views.first().map_or(0, |v| v.ppos.len());
    let mut step_of = vec![0; k];
    for (t, &p) in seq.iter().enumerate() {
        step_of[p] = t;
    }
    // probe child j once its last shared vertex is placed
    let mut probes: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, v) in views.iter().enumerate().skip(1) {
        if let Some(last) = v.ppos.iter().map(|&p| step_of[p]).max() {
            probes[last.max(seed_len.saturating_sub(1))].push(j);
        }
    }
    let earlier: Vec<Vec<usize>> = (0..k)
        .map(|t| (0..t).filter(|&s| g.has_edge(bag[seq[t]], bag[seq[s]])).map(|s| seq[s]).collect())
        .collect();

    let mut out = Vec::new();
    let mut assign = vec![0usize; k];
    let seeds: Vec<u64> = match views.first() {
        Some(v) => v.proj.clone(),
        None => vec![0],
    };
    for seed in seeds {
        if let Some(v) = views.first() {
            for &p in &v.ppos {
                assign[p] = node.digit(seed, p, lists);
            }
        }
        if seed_len > 0 && !probes[seed_len - 1].iter().all(|&j| views[j].proj.binary_search(&views[j].key(&assign)).is_ok()) {
            continue;
        }
        extend(seed_len, &seq, &earlier, &probes, &views, bag, lists, node, &mut assign, &mut out, stats);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    t: usize,
    seq: &[usize],
    earlier: &[Vec<usize>],
    probes: &[Vec<usize>],
    views: &[ChildView],
    bag: &[Vertex],
    lists: &[Vec<Color>],
    node: &Node,
    assign: &mut [usize],
    out: &mut Vec<u64>,
    stats: &mut DpStats,
) {
    if t == seq.len() {
        out.push(assign.iter().zip(&node.shift).fold(0, |code, (&a, &s)| code | (a as u64) << s));
        return;
    }
    let p = seq[t];
    let list = &lists[bag[p]];
    'colors: for ci in 0..list.len() {
        stats.work += 1;
        let c = list[ci];
        for &s in &earlier[t] {
            if lists[bag[s]][assign[s]] == c {
                continue 'colors;
            }
        }
        assign[p] = ci;
        for &j in &probes[t] {
            if views[j].proj.binary_search(&views[j].key(assign)).is_err() {
                continue 'colors;
            }
        }
        extend(t + 1, seq, earlier, probes, views, bag, lists, node, assign, out, stats);
    }
}
