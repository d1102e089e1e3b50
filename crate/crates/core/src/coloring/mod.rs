//! List assignments, colorings, and the exact coloring engines.

mod dp;
mod oracle;

pub use dp::{dp_list_color, dp_list_color_stats, list_color, DpStats};
pub use oracle::{
    brute_force_color, brute_force_color_with, compute_phi, is_x_critical, PhiSet, DEFAULT_ORACLE_CAP,
    PHI_TUPLE_CAP,
};

use crate::graph::{Graph, Vertex};
use crate::treewidth::TdViolation;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type Color = u8;

/// Largest representable color.
pub const MAX_COLOR: Color = 63;

/// Set of colors in `1..=63` as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// Colors `1..=k`.
    pub fn range(k: Color) -> Self {
        assert!(k <= MAX_COLOR);
        ColorSet(((1u64 << k) - 1) << 1)
    }

    pub fn single(c: Color) -> Self {
        let mut s = ColorSet::EMPTY;
        s.insert(c);
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, c: Color) {
        assert!((1..=MAX_COLOR).contains(&c), "color {c} out of range 1..=63");
        self.0 |= 1 << c;
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1u64 << c);
    }

    pub fn contains(self, c: Color) -> bool {
        c <= MAX_COLOR && self.0 >> c & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 | o.0)
    }

    pub fn intersection(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 & o.0)
    }

    pub fn difference(self, o: ColorSet) -> ColorSet {
        ColorSet(self.0 & !o.0)
    }

    pub fn last(self) -> Option<Color> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as Color)
    }

    pub fn first(self) -> Option<Color> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Color)
    }

    /// Ascending.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut b = self.0;
        std::iter::from_fn(move || {
            (b != 0).then(|| {
                let c = b.trailing_zeros() as Color;
                b &= b - 1;
                c
            })
        })
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(it: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in it {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Vertex to color-set map. Vertices without an entry have the empty list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ListAssignment {
    lists: BTreeMap<Vertex, ColorSet>,
}

impl ListAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform(g: &Graph, colors: ColorSet) -> Self {
        ListAssignment { lists: g.vertices().map(|v| (v, colors)).collect() }
    }

    pub fn set(&mut self, v: Vertex, s: ColorSet) {
        self.lists.insert(v, s);
    }

    pub fn get(&self, v: Vertex) -> ColorSet {
        self.lists.get(&v).copied().unwrap_or_default()
    }

    pub fn remove(&mut self, v: Vertex) {
        self.lists.remove(&v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, ColorSet)> + '_ {
        self.lists.iter().map(|(&v, &s)| (v, s))
    }

    pub fn max_color(&self) -> Color {
        self.lists.values().filter_map(|s| s.last()).max().unwrap_or(0)
    }

    /// Smallest and largest list size over the vertices of `g`.
    pub fn size_range(&self, g: &Graph) -> (usize, usize) {
        let sizes = g.vertices().map(|v| self.get(v).len());
        sizes.fold((usize::MAX, 0), |(lo, hi), s| (lo.min(s), hi.max(s)))
    }

    /// Entries restricted to the vertices of `g`.
    pub fn restricted_to(&self, g: &Graph) -> ListAssignment {
        ListAssignment { lists: g.vertices().map(|v| (v, self.get(v))).collect() }
    }
}

/// Vertex to color map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coloring(pub BTreeMap<Vertex, Color>);

impl Coloring {
    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.0.get(&v).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringViolation {
    #[error("vertex {0} is not colored")]
    Uncolored(Vertex),
    #[error("vertex {v} has color {c} outside its list")]
    NotInList { v: Vertex, c: Color },
    #[error("edge {0}-{1} is monochromatic")]
    Monochromatic(Vertex, Vertex),
}

/// Independent scan: every vertex colored from its list, every edge proper.
pub fn verify_coloring(g: &Graph, l: &ListAssignment, c: &Coloring) -> Result<(), ColoringViolation> {
    for v in g.vertices() {
        let col = c.get(v).ok_or(ColoringViolation::Uncolored(v))?;
        if !l.get(v).contains(col) {
            return Err(ColoringViolation::NotInList { v, c: col });
        }
    }
    for (u, v) in g.edges() {
        if c.get(u) == c.get(v) {
            return Err(ColoringViolation::Monochromatic(u, v));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("component with {size} undecided vertices exceeds the oracle cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("precoloring of {tuples} tuples over {len} vertices exceeds the cap")]
    PhiCap { len: usize, tuples: usize },
    #[error("X lists vertex {0} twice or names a vertex not in the graph")]
    BadX(Vertex),
    #[error("invalid decomposition: {0}")]
    Decomposition(#[from] TdViolation),
    #[error("bag at node {0} has too many list combinations to encode")]
    TooWide(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_set_ops() {
        let s: ColorSet = [3, 1, 5].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!((s.first(), s.last(), s.len()), (Some(1), Some(5), 3));
        assert_eq!(ColorSet::range(3).iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(ColorSet::range(63).contains(63));
        assert!(!s.contains(64));
    }

    #[test]
    fn witness_scan() {
        let g = Graph::path(3);
        let l = ListAssignment::uniform(&g, ColorSet::range(2));
        let good = Coloring([(0, 1), (1, 2), (2, 1)].into_iter().collect());
        assert_eq!(verify_coloring(&g, &l, &good), Ok(()));
        let bad = Coloring([(0, 1), (1, 1), (2, 2)].into_iter().collect());
        assert_eq!(verify_coloring(&g, &l, &bad), Err(ColoringViolation::Monochromatic(0, 1)));
        let out = Coloring([(0, 3), (1, 1), (2, 2)].into_iter().collect());
        assert_eq!(verify_coloring(&g, &l, &out), Err(ColoringViolation::NotInList { v: 0, c: 3 }));
    }
}
