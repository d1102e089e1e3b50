//! Exhaustive backtracking oracle, precoloring-extension sets, criticality.
//!
//! Search: forced (singleton) lists are propagated first, the remaining
//! vertices split into components, and each component is searched with
//! smallest-domain-first branching and forward checking. Ties go to the smaller
//! id and colors are tried in ascending order, so the result is deterministic.

use super::{Color, ColorSet, Coloring, ColoringError, ListAssignment};
use crate::graph::{Graph, Vertex};
use std::collections::{BTreeSet, VecDeque};

/// Largest component the oracle will search.
pub const DEFAULT_ORACLE_CAP: usize = 20;
/// Largest number of candidate precolorings `compute_phi` will try.
pub const PHI_TUPLE_CAP: usize = 20_000;

pub fn brute_force_color(g: &Graph, l: &ListAssignment) -> Result<Option<Coloring>, ColoringError> {
    brute_force_color_with(g, l, DEFAULT_ORACLE_CAP)
}

/// As `brute_force_color`, with the cap applied to each component left after
/// propagating singleton lists.
pub fn brute_force_color_with(
    g: &Graph,
    l: &ListAssignment,
    cap: usize,
) -> Result<Option<Coloring>, ColoringError> {
    let bound = g.id_bound();
    let mut dom = vec![ColorSet::EMPTY; bound];
    for v in g.vertices() {
        dom[v] = l.get(v);
        if dom[v].is_empty() {
            return Ok(None);
        }
    }
    let mut color: Vec<Option<Color>> = vec![None; bound];
    let mut queue: VecDeque<Vertex> = g.vertices().filter(|&v| dom[v].len() == 1).collect();
    while let Some(s) = queue.pop_front() {
        if color[s].is_some() {
            continue;
        }
        let c = dom[s].first().unwrap();
        color[s] = Some(c);
        for &u in g.neighbors(s) {
            if color[u] == Some(c) {
                return Ok(None);
            }
            if color[u].is_none() && dom[u].contains(c) {
                dom[u].remove(c);
                match dom[u].len() {
                    0 => return Ok(None),
                    1 => queue.push_back(u),
                    _ => {}
                }
            }
        }
    }
    let free = g.induced(|v| color[v].is_none());
    for comp in free.components() {
        if comp.len() > cap {
            return Err(ColoringError::CapExceeded { size: comp.len(), cap });
        }
        if !search(&free, &comp, &mut dom, &mut color) {
            return Ok(None);
        }
    }
    Ok(Some(Coloring(g.vertices().map(|v| (v, color[v].unwrap())).collect())))
}

fn search(g: &Graph, comp: &[Vertex], dom: &mut [ColorSet], color: &mut [Option<Color>]) -> bool {
    let Some(v) = comp
        .iter()
        .copied()
        .filter(|&v| color[v].is_none())
        .min_by_key(|&v| (dom[v].len(), v))
    else {
        return true;
    };
    for c in dom[v].iter() {
        let mut pruned = Vec::new();
        let mut dead = false;
        for &u in g.neighbors(v) {
            if color[u].is_none() && dom[u].contains(c) {
                dom[u].remove(c);
                pruned.push(u);
                if dom[u].is_empty() {
                    dead = true;
                    break;
                }
            }
        }
        if !dead {
            color[v] = Some(c);
            if search(g, comp, dom, color) {
                return true;
            }
            color[v] = None;
        }
        for u in pruned {
            dom[u].insert(c);
        }
    }
    false
}

/// Φ(G, L, X): the colorings of the sequence `x` that extend to all of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSet {
    pub x: Vec<Vertex>,
    pub members: BTreeSet<Vec<Color>>,
}

pub fn compute_phi(g: &Graph, l: &ListAssignment, x: &[Vertex]) -> Result<PhiSet, ColoringError> {
    let mut seen = BTreeSet::new();
    for &v in x {
        if !g.contains(v) || !seen.insert(v) {
            return Err(ColoringError::BadX(v));
        }
    }
    let lists: Vec<Vec<Color>> = x.iter().map(|&v| l.get(v).iter().collect()).collect();
    let tuples = lists.iter().map(Vec::len).try_fold(1usize, |a, b| a.checked_mul(b));
    match tuples {
        Some(t) if x.len() <= 4 && t <= PHI_TUPLE_CAP => {}
        _ => return Err(ColoringError::PhiCap { len: x.len(), tuples: tuples.unwrap_or(usize::MAX) }),
    }
    let mut members = BTreeSet::new();
    let mut idx = vec![0usize; x.len()];
    if lists.iter().any(Vec::is_empty) {
        return Ok(PhiSet { x: x.to_vec(), members });
    }
    loop {
        let tuple: Vec<Color> = idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect();
        let proper = (0..x.len())
            .all(|i| (i + 1..x.len()).all(|j| tuple[i] != tuple[j] || !g.has_edge(x[i], x[j])));
        if proper {
            let mut lx = l.clone();
            for (&v, &c) in x.iter().zip(&tuple) {
                lx.set(v, ColorSet::single(c));
            }
            if brute_force_color(g, &lx)?.is_some() {
                members.insert(tuple);
            }
        }
        // odometer, last position fastest
        let mut p = x.len();
        loop {
            if p == 0 {
                return Ok(PhiSet { x: x.to_vec(), members });
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < lists[p].len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// True iff deleting any single edge, or any single vertex outside `x`, changes Φ.
pub fn is_x_critical(g: &Graph, l: &ListAssignment, x: &[Vertex]) -> Result<bool, ColoringError> {
    let base = compute_phi(g, l, x)?;
    for (u, v) in g.edges() {
        let mut h = g.clone();
        h.remove_edge(u, v);
        if compute_phi(&h, l, x)? == base {
            return Ok(false);
        }
    }
    for v in g.vertices().filter(|v| !x.contains(v)) {
        let mut h = g.clone();
        h.remove_vertex(v);
        if compute_phi(&h, l, x)? == base {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;
    use crate::plane::generate_grid;

    fn lists(g: &Graph, ls: &[&[Color]]) -> ListAssignment {
        let mut l = ListAssignment::new();
        for (v, s) in g.vertices().zip(ls) {
            l.set(v, s.iter().copied().collect());
        }
        l
    }

    #[test]
    fn oracle_examples() {
        let k4 = Graph::complete(4);
        assert_eq!(brute_force_color(&k4, &ListAssignment::uniform(&k4, ColorSet::range(3))), Ok(None));
        let grid = generate_grid(5, 5).into_graph();
        let l = ListAssignment::uniform(&grid, ColorSet::range(2));
        // 25 vertices: above the default cap
        assert!(brute_force_color(&grid, &l).is_err());
        let c = brute_force_color_with(&grid, &l, 25).unwrap().unwrap();
        verify_coloring(&grid, &l, &c).unwrap();
        let p = Graph::path(3);
        let l = lists(&p, &[&[1], &[1, 2], &[1]]);
        let c = brute_force_color(&p, &l).unwrap().unwrap();
        assert_eq!(c.0.values().copied().collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn oracle_cap() {
        let g = Graph::cycle(30);
        let l = ListAssignment::uniform(&g, ColorSet::range(3));
        assert_eq!(brute_force_color(&g, &l), Err(ColoringError::CapExceeded { size: 30, cap: 20 }));
        assert!(brute_force_color_with(&g, &l, 30).unwrap().is_some());
    }

    #[test]
    fn phi_examples() {
        let tri = Graph::complete(3);
        let l = ListAssignment::uniform(&tri, ColorSet::range(3));
        let phi = compute_phi(&tri, &l, &[0, 1]).unwrap();
        assert_eq!(phi.members.len(), 6);
        assert!(phi.members.iter().all(|t| t[0] != t[1]));
        let one = Graph::new(1);
        let phi = compute_phi(&one, &lists(&one, &[&[1]]), &[0]).unwrap();
        assert_eq!(phi.members, BTreeSet::from([vec![1]]));
        let e = Graph::path(2);
        let l1 = lists(&e, &[&[1], &[1]]);
        assert!(compute_phi(&e, &l1, &[0]).unwrap().members.is_empty());
    }

    #[test]
    fn criticality_examples() {
        let e = Graph::path(2);
        let l1 = lists(&e, &[&[1], &[1]]);
        assert_eq!(is_x_critical(&e, &l1, &[0]), Ok(true));
        let one = Graph::new(1);
        assert_eq!(is_x_critical(&one, &lists(&one, &[&[1]]), &[0]), Ok(true));
        let mut k4p = Graph::complete(4);
        k4p.add_edge(3, 4);
        let l = ListAssignment::uniform(&k4p, ColorSet::range(3));
        assert_eq!(is_x_critical(&k4p, &l, &[]), Ok(false));
    }
}
