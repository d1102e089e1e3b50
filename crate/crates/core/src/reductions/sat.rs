//! Planar 3-SAT to 5-coloring.

use crate::coloring::{brute_force_color_with, Color, ColorSet, Coloring, ListAssignment};
use crate::connectivity::vertex_connectivity_at_least;
use crate::gadgets::{close_x_triangle, glue, make_gadget, GadgetError, Pattern, PatternFamily};
use crate::graph::{Graph, Vertex};
use crate::plane::{EmbeddingError, PlaneGraph};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn value(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// 3-CNF with a drawing of its variable/clause incidence graph, given as the
/// cyclic order of clauses around each variable and of variables around each
/// clause. Variables and clauses are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarCnf {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
    pub var_rotation: Vec<Vec<usize>>,
    pub clause_rotation: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("clause {0} repeats a variable")]
    RepeatedVariable(usize),
    #[error("clause {clause} uses variable {var} but there are only {num_vars}")]
    VarOutOfRange { clause: usize, var: usize, num_vars: usize },
    #[error("rotation of variable {0} is not an ordering of its clauses")]
    BadVarRotation(usize),
    #[error("rotation of clause {0} is not an ordering of its variables")]
    BadClauseRotation(usize),
    #[error("incidence drawing is not planar: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("{0}")]
    Gadget(#[from] GadgetError),
}

impl PlanarCnf {
    pub fn validate(&self) -> Result<(), CnfError> {
        if self.var_rotation.len() != self.num_vars {
            return Err(CnfError::BadVarRotation(self.var_rotation.len().min(self.num_vars)));
        }
        if self.clause_rotation.len() != self.clauses.len() {
            return Err(CnfError::BadClauseRotation(self.clause_rotation.len().min(self.clauses.len())));
        }
        let mut occ = vec![Vec::new(); self.num_vars];
        for (c, cl) in self.clauses.iter().enumerate() {
            let mut vars: Vec<usize> = cl.iter().map(|l| l.var).collect();
            if let Some(&var) = vars.iter().find(|&&v| v >= self.num_vars) {
                return Err(CnfError::VarOutOfRange { clause: c, var, num_vars: self.num_vars });
            }
            vars.sort_unstable();
            if vars[0] == vars[1] || vars[1] == vars[2] {
                return Err(CnfError::RepeatedVariable(c));
            }
            let mut rot = self.clause_rotation[c].to_vec();
            rot.sort_unstable();
            if rot != vars {
                return Err(CnfError::BadClauseRotation(c));
            }
            for v in vars {
                occ[v].push(c);
            }
        }
        for (v, want) in occ.iter().enumerate() {
            let mut got = self.var_rotation[v].clone();
            got.sort_unstable();
            if &got != want {
                return Err(CnfError::BadVarRotation(v));
            }
        }
        self.incidence()?.validate()?;
        Ok(())
    }

    /// Incidence graph: variable `v` is vertex `v`, clause `c` is `num_vars + c`.
    pub fn incidence(&self) -> Result<PlaneGraph, EmbeddingError> {
        let n = self.num_vars;
        let mut rots: Vec<(Vertex, Vec<Vertex>)> =
            self.var_rotation.iter().enumerate().map(|(v, r)| (v, r.iter().map(|&c| n + c).collect())).collect();
        rots.extend(self.clause_rotation.iter().enumerate().map(|(c, r)| (n + c, r.to_vec())));
        PlaneGraph::from_rotations(rots)
    }

    pub fn is_biconnected(&self) -> bool {
        self.incidence().is_ok_and(|pg| vertex_connectivity_at_least(pg.graph(), 2))
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|cl| cl.iter().any(|l| l.value(assignment)))
    }

    /// First satisfying assignment in binary counting order (variable 0 is the
    /// low bit, true = 1).
    pub fn solve_by_enumeration(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars < 30, "enumeration over {} variables", self.num_vars);
        (0u64..1 << self.num_vars)
            .map(|m| (0..self.num_vars).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.evaluate(a))
    }

    /// Searches the rotation systems of the incidence graph in lexicographic
    /// order for a planar one. `None` if the incidence graph is not planar or the
    /// search exceeds `budget` rotation systems.
    pub fn with_searched_layout(num_vars: usize, clauses: Vec<[Literal; 3]>, budget: u64) -> Option<PlanarCnf> {
        let mut var_rotation = vec![Vec::new(); num_vars];
        for (c, cl) in clauses.iter().enumerate() {
            for l in cl {
                var_rotation[l.var].push(c);
            }
        }
        let clause_rotation: Vec<[usize; 3]> = clauses
            .iter()
            .map(|cl| {
                let mut r = [cl[0].var, cl[1].var, cl[2].var];
                r.sort_unstable();
                r
            })
            .collect();
        let mut cnf = PlanarCnf { num_vars, clauses, var_rotation, clause_rotation };
        let mut tried = 0u64;
        loop {
            if cnf.incidence().is_ok_and(|pg| pg.validate().is_ok()) {
                return Some(cnf);
            }
            tried += 1;
            if tried >= budget || !cnf.next_layout() {
                return None;
            }
        }
    }

    /// Advances to the next rotation system, keeping each first entry fixed.
    fn next_layout(&mut self) -> bool {
        for r in self.clause_rotation.iter_mut().rev() {
            if next_permutation(&mut r[1..]) {
                return true;
            }
        }
        for r in self.var_rotation.iter_mut().rev() {
            if r.len() > 2 && next_permutation(&mut r[1..]) {
                return true;
            }
        }
        false
    }

    /// Position (0-based) of the occurrence of `var` in clause `c` around `var`.
    fn occurrence(&self, var: usize, c: usize) -> usize {
        self.var_rotation[var].iter().position(|&d| d == c).expect("validated layout")
    }

    fn literal(&self, c: usize, var: usize) -> Literal {
        *self.clauses[c].iter().find(|l| l.var == var).expect("validated layout")
    }
}

fn next_permutation(s: &mut [usize]) -> bool {
    if s.len() < 2 {
        return false;
    }
    let Some(i) = (0..s.len() - 1).rev().find(|&i| s[i] < s[i + 1]) else {
        s.reverse();
        return false;
    };
    let j = (i + 1..s.len()).rev().find(|&j| s[j] > s[i]).unwrap();
    s.swap(i, j);
    s[i + 1..].reverse();
    true
}

/// The four constraint families on triples used by the compiler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HardFamily {
    /// all equal or all distinct
    A,
    /// first differs from second iff first equals third
    B,
    /// first equals third implies second equals them
    C,
    /// not all equal
    D,
}

impl HardFamily {
    pub const ALL: [HardFamily; 4] = [HardFamily::A, HardFamily::B, HardFamily::C, HardFamily::D];

    pub fn family(self, k: usize) -> PatternFamily {
        use Pattern::*;
        match self {
            HardFamily::A => PatternFamily::new(k, &[Aaa, Abc]),
            HardFamily::B => PatternFamily::new(k, &[Aab, Aba]),
            HardFamily::C => PatternFamily::excluding(k, &[Aba]),
            HardFamily::D => PatternFamily::excluding(k, &[Aaa]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarStructure {
    pub c: Vertex,
    /// `x_0 .. x_k`
    pub chain: Vec<Vertex>,
    /// `x'_i` for the `i`-th appearance, index `i - 1`
    pub prime: Vec<Vertex>,
    pub dprime: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetUse {
    pub family: HardFamily,
    pub x: [Vertex; 3],
    pub internal: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPhi {
    pub graph: Graph,
    pub k: usize,
    pub vars: Vec<VarStructure>,
    /// `(w_c, w'_c)` per clause
    pub clause_w: Vec<(Vertex, Vertex)>,
    pub gadgets: Vec<GadgetUse>,
    /// Families whose gadget carries the X triangle; the others are glued by
    /// identifying X only.
    pub closed: Vec<HardFamily>,
}

impl GPhi {
    /// Vertices appearing in some gadget triple, ascending.
    pub fn skeleton(&self) -> Vec<Vertex> {
        let s: BTreeSet<Vertex> = self.gadgets.iter().flat_map(|g| g.x).collect();
        s.into_iter().collect()
    }

    /// Variable `x` is true iff `c_x` and `x_0` get different colors.
    pub fn extract_assignment(&self, coloring: &Coloring) -> Vec<bool> {
        self.vars.iter().map(|s| coloring.get(s.c) != coloring.get(s.chain[0])).collect()
    }
}

/// Builds `G_phi`, 5-colorable iff `phi` is satisfiable.
pub fn planar3sat_to_coloring(phi: &PlanarCnf) -> Result<GPhi, CnfError> {
    phi.validate()?;
    let k = 5;
    let mut gadget_graphs = Vec::new();
    let mut closed = Vec::new();
    for f in HardFamily::ALL {
        let open = make_gadget(f.family(k))?;
        match close_x_triangle(&open)? {
            Some(c) => {
                closed.push(f);
                gadget_graphs.push(c.graph);
            }
            None => gadget_graphs.push(open.graph),
        }
    }

    let mut g = Graph::new(0);
    let mut vars: Vec<VarStructure> = (0..phi.num_vars)
        .map(|v| {
            let deg = phi.var_rotation[v].len();
            VarStructure {
                c: g.add_vertex(),
                chain: (0..=deg).map(|_| g.add_vertex()).collect(),
                prime: vec![usize::MAX; deg],
                dprime: (0..deg).map(|_| g.add_vertex()).collect(),
            }
        })
        .collect();
    // y'_{i_y} is x''_{i_x}; the remaining primes are fresh
    for (c, rot) in phi.clause_rotation.iter().enumerate() {
        let (x, y) = (rot[0], rot[1]);
        let (ix, iy) = (phi.occurrence(x, c), phi.occurrence(y, c));
        vars[y].prime[iy] = vars[x].dprime[ix];
    }
    for s in vars.iter_mut() {
        for p in s.prime.iter_mut().filter(|p| **p == usize::MAX) {
            *p = g.add_vertex();
        }
    }

    let mut gadgets = Vec::new();
    let mut place = |g: &mut Graph, f: HardFamily, x: [Vertex; 3]| {
        let internal = glue(g, &gadget_graphs[f as usize], x);
        gadgets.push(GadgetUse { family: f, x, internal });
    };
    for (v, s) in vars.iter().enumerate() {
        for i in 1..s.chain.len() {
            place(&mut g, HardFamily::A, [s.c, s.chain[i - 1], s.chain[i]]);
        }
        for (i, &c) in phi.var_rotation[v].iter().enumerate() {
            place(&mut g, HardFamily::A, [s.chain[i], s.chain[i + 1], s.prime[i]]);
            let f = if phi.literal(c, v).negated { HardFamily::B } else { HardFamily::A };
            place(&mut g, f, [s.prime[i], s.chain[i + 1], s.dprime[i]]);
        }
    }
    let mut clause_w = Vec::new();
    for (c, &[x, y, z]) in phi.clause_rotation.iter().enumerate() {
        let (ix, iy, iz) = (phi.occurrence(x, c), phi.occurrence(y, c), phi.occurrence(z, c));
        let (x1, x2) = (vars[x].prime[ix], vars[x].dprime[ix]);
        let y2 = vars[y].dprime[iy];
        let (z1, z2) = (vars[z].prime[iz], vars[z].dprime[iz]);
        place(&mut g, HardFamily::C, [x1, x2, y2]);
        let w = g.add_vertex();
        let w2 = g.add_vertex();
        place(&mut g, HardFamily::A, [x1, y2, w]);
        place(&mut g, HardFamily::A, [x1, w, w2]);
        place(&mut g, HardFamily::A, [w2, w, z1]);
        place(&mut g, HardFamily::D, [w2, z1, z2]);
        clause_w.push((w, w2));
    }
    Ok(GPhi { graph: g, k, vars, clause_w, gadgets, closed })
}

/// Colors the skeleton by backtracking over the gadget triple constraints, with
/// the vertices in `fixed` pinned. Vertices are tried in ascending id order.
pub fn solve_skeleton(gphi: &GPhi, fixed: &[(Vertex, Color)]) -> Option<Vec<(Vertex, Color)>> {
    let skel = gphi.skeleton();
    let bound = gphi.graph.id_bound();
    let mut col = vec![0 as Color; bound];
    let mut pinned = vec![false; bound];
    for &(v, c) in fixed {
        col[v] = c;
        pinned[v] = true;
    }
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); bound];
    for (i, gu) in gphi.gadgets.iter().enumerate() {
        for &v in &gu.x {
            watch[v].push(i);
        }
    }
    let fams: Vec<PatternFamily> = gphi.gadgets.iter().map(|gu| gu.family.family(gphi.k)).collect();
    let ok = |col: &[Color], v: Vertex| {
        watch[v].iter().all(|&i| {
            let t = gphi.gadgets[i].x.map(|u| col[u]);
            t.contains(&0) || fams[i].contains(t)
        })
    };
    if fixed.iter().any(|&(v, _)| !ok(&col, v)) {
        return None;
    }
    let free: Vec<Vertex> = skel.iter().copied().filter(|&v| !pinned[v]).collect();
    fn rec(i: usize, free: &[Vertex], col: &mut [Color], k: Color, ok: &dyn Fn(&[Color], Vertex) -> bool) -> bool {
        let Some(&v) = free.get(i) else { return true };
        for c in 1..=k {
            col[v] = c;
            if ok(col, v) && rec(i + 1, free, col, k, ok) {
                return true;
            }
        }
        col[v] = 0;
        false
    }
    rec(0, &free, &mut col, gphi.k as Color, &ok).then(|| skel.iter().map(|&v| (v, col[v])).collect())
}

/// Fills the internal vertices of every gadget around a skeleton coloring.
pub fn extend_skeleton(gphi: &GPhi, skeleton: &[(Vertex, Color)]) -> Option<Coloring> {
    let mut coloring = Coloring(skeleton.iter().copied().collect());
    let palette = ColorSet::range(gphi.k as Color);
    for gu in &gphi.gadgets {
        let mut keep = gu.internal.clone();
        keep.extend(gu.x);
        keep.sort_unstable();
        let sub = gphi.graph.induced(|v| keep.binary_search(&v).is_ok());
        let mut l = ListAssignment::uniform(&sub, palette);
        for v in gu.x {
            l.set(v, ColorSet::single(coloring.get(v)?));
        }
        let part = brute_force_color_with(&sub, &l, sub.num_vertices()).ok()??;
        coloring.0.extend(part.0);
    }
    Some(coloring)
}

/// A 5-coloring of `G_phi` from a satisfying assignment: chains get color 1 for
/// false variables and `3 + (j mod 2)` for true ones, everything else follows.
pub fn coloring_from_assignment(gphi: &GPhi, assignment: &[bool]) -> Option<Coloring> {
    let mut fixed = Vec::new();
    for (s, &val) in gphi.vars.iter().zip(assignment) {
        for (j, &v) in s.chain.iter().enumerate() {
            fixed.push((v, if val { 3 + (j % 2) as Color } else { 1 }));
        }
    }
    let skel = solve_skeleton(gphi, &fixed)?;
    extend_skeleton(gphi, &skel)
}

/// Formulas with at most 4 variables and 3 clauses, one per class under renaming
/// variables, each with the first planar layout in search order. Formulas whose
/// incidence graph is not planar are skipped.
pub fn desk_corpus() -> Vec<PlanarCnf> {
    let mut types = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                for signs in 0..8u8 {
                    let l = |v, bit: u8| Literal { var: v, negated: signs >> bit & 1 == 1 };
                    types.push([l(a, 0), l(b, 1), l(c, 2)]);
                }
            }
        }
    }
    let perms = permutations4();
    let canon = |f: &[[Literal; 3]], p: &[usize; 4]| {
        let mut out: Vec<[Literal; 3]> = f
            .iter()
            .map(|cl| {
                let mut m = cl.map(|l| Literal { var: p[l.var], ..l });
                m.sort_unstable();
                m
            })
            .collect();
        out.sort_unstable();
        out
    };
    let mut out = Vec::new();
    let mut pick = |f: Vec<[Literal; 3]>| {
        let used: BTreeSet<usize> = f.iter().flatten().map(|l| l.var).collect();
        if used.iter().copied().ne(0..used.len()) {
            return;
        }
        if perms.iter().any(|p| canon(&f, p) < f) {
            return;
        }
        if let Some(cnf) = PlanarCnf::with_searched_layout(used.len(), f, 1 << 16) {
            out.push(cnf);
        }
    };
    let n = types.len();
    for i in 0..n {
        pick(vec![types[i]]);
        for j in i + 1..n {
            pick(vec![types[i], types[j]]);
            for l in j + 1..n {
                pick(vec![types[i], types[j], types[l]]);
            }
        }
    }
    out
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut p = [0, 1, 2, 3];
    let mut out = vec![p];
    while next_permutation(&mut p) {
        out.push(p);
    }
    out
}

/// `(x ∨ y ∨ z)` on three fresh variables.
pub fn single_clause() -> PlanarCnf {
    PlanarCnf {
        num_vars: 3,
        clauses: vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]],
        var_rotation: vec![vec![0], vec![0], vec![0]],
        clause_rotation: vec![[0, 1, 2]],
    }
}

/// The clause `(x ∨ y ∨ z)` twice; its incidence graph `K_{2,3}` is 2-connected.
pub fn doubled_single_clause() -> PlanarCnf {
    let cl = [Literal::pos(0), Literal::pos(1), Literal::pos(2)];
    PlanarCnf {
        num_vars: 3,
        clauses: vec![cl, cl],
        var_rotation: vec![vec![0, 1], vec![0, 1], vec![0, 1]],
        clause_rotation: vec![[0, 1, 2], [2, 1, 0]],
    }
}

/// Unsatisfiable planar 3-CNF: the eight clauses negate the leaves of a depth-3
/// decision tree on `a, b` and one private variable per branch.
pub const UNSAT_FIXTURE: &str = "\
c decision-tree contradiction, 2-connected planar incidence graph
p cnf 6 8
1 2 3 0
1 2 -3 0
1 -2 4 0
1 -2 -4 0
-1 2 5 0
-1 2 -5 0
-1 -2 6 0
-1 -2 -6 0
rot v 1 1 2 8 7 6 5 4 3
rot v 2 1 3 4 5 6 7 8 2
rot v 3 2 1
rot v 4 3 4
rot v 5 5 6
rot v 6 7 8
rot c 1 1 2 3
rot c 2 2 1 3
rot c 3 2 1 4
rot c 4 4 1 2
rot c 5 2 1 5
rot c 6 5 1 2
rot c 7 2 1 6
rot c 8 6 1 2
";

pub fn unsat_fixture() -> PlanarCnf {
    crate::io::parse_cnf(UNSAT_FIXTURE).expect("fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{list_color, verify_coloring};

    #[test]
    fn layout_validation() {
        single_clause().validate().unwrap();
        doubled_single_clause().validate().unwrap();
        assert!(!single_clause().is_biconnected());
        assert!(doubled_single_clause().is_biconnected());
        let mut bad = single_clause();
        bad.clauses[0][1].var = 0;
        assert_eq!(bad.validate(), Err(CnfError::RepeatedVariable(0)));
        let fx = unsat_fixture();
        fx.validate().unwrap();
        assert!(fx.is_biconnected());
        assert_eq!(fx.solve_by_enumeration(), None);
    }

    #[test]
    fn searched_layout_rejects_k33() {
        let cl = |s: bool| [Literal { var: 0, negated: s }, Literal::pos(1), Literal::pos(2)];
        assert!(PlanarCnf::with_searched_layout(3, vec![cl(false), cl(true)], 1000).is_some());
        let three = vec![cl(false), cl(true), [Literal::neg(0), Literal::neg(1), Literal::pos(2)]];
        assert!(PlanarCnf::with_searched_layout(3, three, 1 << 16).is_none());
    }

    #[test]
    fn single_clause_compiles() {
        let phi = single_clause();
        let gp = planar3sat_to_coloring(&phi).unwrap();
        assert!(gp.closed.is_empty());
        let l = ListAssignment::uniform(&gp.graph, ColorSet::range(5));
        let c = list_color(&gp.graph, &l).unwrap().expect("5-colorable");
        verify_coloring(&gp.graph, &l, &c).unwrap();
        assert!(phi.evaluate(&gp.extract_assignment(&c)));
        for m in 0..8u8 {
            let a: Vec<bool> = (0..3).map(|i| m >> i & 1 == 1).collect();
            let built = coloring_from_assignment(&gp, &a);
            assert_eq!(built.is_some(), phi.evaluate(&a), "{a:?}");
            if let Some(c) = built {
                verify_coloring(&gp.graph, &l, &c).unwrap();
                assert_eq!(gp.extract_assignment(&c), a);
            }
        }
    }

    #[test]
    fn three_connectivity() {
        let gp = planar3sat_to_coloring(&doubled_single_clause()).unwrap();
        assert!(vertex_connectivity_at_least(&gp.graph, 3));
    }

    #[test]
    fn desk_corpus_shape() {
        let corpus = desk_corpus();
        assert!(!corpus.is_empty());
        for phi in &corpus {
            phi.validate().unwrap();
            assert!(phi.num_vars <= 4 && phi.clauses.len() <= 3);
        }
    }
}
