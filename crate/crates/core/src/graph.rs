//! Simple undirected graphs with stable vertex ids.
//!
//! Removing a vertex leaves a hole in the id space, so removal logs,
//! list files and witnesses can keep referring to the original ids.

use std::collections::VecDeque;

pub type Vertex = usize;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    present: Vec<bool>,
    n: usize,
    m: usize,
}

impl Graph {
    /// Graph on vertices `0..n` with no edges.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            present: vec![true; n],
            n,
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    /// One past the largest id ever used.
    pub fn id_bound(&self) -> usize {
        self.present.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    /// Makes `v` present, growing the id space if needed.
    pub fn ensure_vertex(&mut self, v: Vertex) {
        if v >= self.present.len() {
            self.present.resize(v + 1, false);
            self.adj.resize(v + 1, Vec::new());
        }
        if !self.present[v] {
            self.present[v] = true;
            self.n += 1;
        }
    }

    pub fn add_vertex(&mut self) -> Vertex {
        let v = self.id_bound();
        self.ensure_vertex(v);
        v
    }

    /// Adds the edge, creating endpoints as needed. Returns false if it already existed.
    ///
    /// Panics on a self-loop; parsers reject loops before getting here.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert_ne!(u, v, "self-loop at {u}");
        self.ensure_vertex(u);
        self.ensure_vertex(v);
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                self.m += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let i = self.adj[u].binary_search(&v).unwrap();
        self.adj[u].remove(i);
        let j = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(j);
        self.m -= 1;
        true
    }

    pub fn remove_vertex(&mut self, v: Vertex) {
        if !self.contains(v) {
            return;
        }
        let nbrs = std::mem::take(&mut self.adj[v]);
        for &u in &nbrs {
            let j = self.adj[u].binary_search(&v).unwrap();
            self.adj[u].remove(j);
        }
        self.m -= nbrs.len();
        self.present[v] = false;
        self.n -= 1;
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.contains(u) && self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbor list; empty for absent vertices.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        self.adj.get(v).map(|a| a.as_slice()).unwrap_or(&[])
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(v, &p)| p.then_some(v))
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by the vertices satisfying `keep`, same ids.
    pub fn induced(&self, keep: impl Fn(Vertex) -> bool) -> Graph {
        let mut g = self.clone();
        for v in self.vertices() {
            if !keep(v) {
                g.remove_vertex(v);
            }
        }
        g
    }

    /// Union of vertex and edge sets.
    pub fn union_with(&mut self, other: &Graph) {
        for v in other.vertices() {
            self.ensure_vertex(v);
        }
        for (u, v) in other.edges() {
            self.add_edge(u, v);
        }
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.id_bound()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// Returns `g` plus one fresh vertex adjacent to every vertex of `g`.
pub fn add_universal_vertex(g: &Graph) -> (Graph, Vertex) {
    let mut h = g.clone();
    let u = h.add_vertex();
    for v in g.vertices() {
        h.add_edge(u, v);
    }
    (h, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_survive_removal() {
        let mut g = Graph::cycle(5);
        g.remove_vertex(2);
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.num_edges(), 3);
        assert!(!g.contains(2));
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![0, 1, 3, 4]);
        assert_eq!(g.components().len(), 1);
        g.remove_vertex(0);
        assert_eq!(g.components(), vec![vec![1], vec![3, 4]]);
    }

    #[test]
    fn duplicate_edges_ignored() {
        let mut g = Graph::new(2);
        assert!(g.add_edge(0, 1));
        assert!(!g.add_edge(1, 0));
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn universal_vertex() {
        let (k5, u) = add_universal_vertex(&Graph::complete(4));
        assert_eq!(u, 4);
        assert_eq!(k5, Graph::complete(5));
        let (star, _) = add_universal_vertex(&Graph::new(3));
        assert_eq!(star.num_edges(), 3);
        assert_eq!(star.degree(3), 3);
    }
}
