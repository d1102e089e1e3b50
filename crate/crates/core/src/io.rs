//! Text formats: embeddings, DIMACS graphs, list assignments, witnesses, PACE
//! tree decompositions, vertex sets, piece decompositions, layout CNF, and gadget
//! catalogs.

use crate::coloring::{Color, ColorSet, Coloring, ListAssignment, MAX_COLOR};
use crate::decomposition::{AlmostEmbeddedPiece, ApexKind, CliqueSum, CliqueSumDecomposition, Vortex};
use crate::gadgets::{GadgetInstance, Pattern, PatternFamily};
use crate::graph::{Graph, Vertex};
use crate::plane::PlaneGraph;
use crate::reductions::{Literal, PlanarCnf};
use crate::treewidth::{TreeDecomposition, VortexPathDecomposition};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

/// `line` is 1-based; 0 refers to the input as a whole.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {msg}", if *line == 0 { "input".to_string() } else { format!("line {line}") })]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Non-empty lines with `#` comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: FromStr>(line: usize, tok: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError { line, msg: format!("expected a number, found `{tok}`") })
}

fn nums<T: FromStr>(line: usize, toks: &[&str]) -> Result<Vec<T>, ParseError> {
    toks.iter().map(|t| num(line, t)).collect()
}

/// A graph file: an embedding or a plain graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphInput {
    Plane(PlaneGraph),
    Plain(Graph),
}

impl GraphInput {
    pub fn graph(&self) -> &Graph {
        match self {
            GraphInput::Plane(pg) => pg.graph(),
            GraphInput::Plain(g) => g,
        }
    }
}

/// `planar_rotation 1` with `v <id> <clockwise neighbors>` lines, the same with
/// `planar_rotation 0` for a plain adjacency list, or DIMACS `p edge`/`e` with
/// 1-based ids kept as given.
pub fn parse_graph(text: &str) -> Result<GraphInput, ParseError> {
    let mut it = lines(text).skip_while(|(_, t)| t[0] == "c");
    let Some((l0, head)) = it.next() else { return err(0, "empty graph file") };
    match head[0] {
        "planar_rotation" => {
            let planar = match head.get(1) {
                Some(&"1") => true,
                Some(&"0") => false,
                _ => return err(l0, "expected `planar_rotation 0` or `planar_rotation 1`"),
            };
            let mut rots = Vec::new();
            let mut where_ = BTreeMap::new();
            for (ln, toks) in it {
                if toks[0] != "v" || toks.len() < 2 {
                    return err(ln, format!("expected `v <id> <neighbors>`, found `{}`", toks.join(" ")));
                }
                let v: Vertex = num(ln, toks[1])?;
                let nb: Vec<Vertex> = nums(ln, &toks[2..])?;
                if where_.insert(v, ln).is_some() {
                    return err(ln, format!("vertex {v} listed twice"));
                }
                if nb.contains(&v) {
                    return err(ln, format!("vertex {v} lists itself"));
                }
                rots.push((v, nb));
            }
            if planar {
                PlaneGraph::from_rotations(rots).map(GraphInput::Plane).map_err(|e| {
                    let line = match e {
                        crate::plane::EmbeddingError::DuplicateNeighbor { v, .. }
                        | crate::plane::EmbeddingError::Asymmetric { u: v, .. } => where_.get(&v).copied().unwrap_or(0),
                        _ => 0,
                    };
                    ParseError { line, msg: e.to_string() }
                })
            } else {
                let mut g = Graph::default();
                for (v, nb) in rots {
                    g.ensure_vertex(v);
                    for u in nb {
                        g.add_edge(v, u);
                    }
                }
                Ok(GraphInput::Plain(g))
            }
        }
        "p" => {
            if head.len() < 4 || head[1] != "edge" {
                return err(l0, "expected `p edge <n> <m>`");
            }
            let n: usize = num(l0, head[2])?;
            let m: usize = num(l0, head[3])?;
            let mut g = Graph::new(n + 1);
            g.remove_vertex(0);
            let mut count = 0;
            for (ln, toks) in it {
                if toks[0] == "c" {
                    continue;
                }
                if toks[0] != "e" || toks.len() != 3 {
                    return err(ln, "expected `e <u> <v>`");
                }
                let (u, v): (Vertex, Vertex) = (num(ln, toks[1])?, num(ln, toks[2])?);
                if !(1..=n).contains(&u) || !(1..=n).contains(&v) || u == v {
                    return err(ln, format!("bad edge {u} {v}"));
                }
                g.add_edge(u, v);
                count += 1;
            }
            if count != m {
                return err(l0, format!("header declares {m} edges, found {count}"));
            }
            Ok(GraphInput::Plain(g))
        }
        other => err(l0, format!("unknown header `{other}`")),
    }
}

pub fn parse_plane(text: &str) -> Result<PlaneGraph, ParseError> {
    match parse_graph(text)? {
        GraphInput::Plane(pg) => Ok(pg),
        GraphInput::Plain(_) => err(0, "an embedding (`planar_rotation 1`) is required"),
    }
}

pub fn write_plane(pg: &PlaneGraph) -> String {
    let mut s = String::from("planar_rotation 1\n");
    for v in pg.vertices() {
        write_vertex_line(&mut s, v, pg.rotation(v));
    }
    s
}

/// Adjacency-list form under header `planar_rotation 0`.
pub fn write_plain(g: &Graph) -> String {
    let mut s = String::from("planar_rotation 0\n");
    for v in g.vertices() {
        write_vertex_line(&mut s, v, g.neighbors(v));
    }
    s
}

fn write_vertex_line(s: &mut String, v: Vertex, nb: &[Vertex]) {
    let _ = write!(s, "v {v}");
    for u in nb {
        let _ = write!(s, " {u}");
    }
    s.push('\n');
}

fn parse_colors(line: usize, toks: &[&str]) -> Result<ColorSet, ParseError> {
    let mut set = ColorSet::EMPTY;
    for t in toks {
        let c: u32 = num(line, t)?;
        if c == 0 || c > MAX_COLOR as u32 {
            return err(line, format!("color {c} outside 1..={MAX_COLOR}"));
        }
        set.insert(c as Color);
    }
    Ok(set)
}

/// Lines `<v> : <colors>`; `*: <colors>` sets the list of every vertex of `g`
/// without its own line.
pub fn parse_lists(text: &str, g: &Graph) -> Result<ListAssignment, ParseError> {
    let mut default = None;
    let mut l = ListAssignment::new();
    for (ln, toks) in lines(text) {
        let joined = toks.join(" ");
        let Some((lhs, rhs)) = joined.split_once(':') else {
            return err(ln, "expected `<vertex> : <colors>`");
        };
        let rhs: Vec<&str> = rhs.split_whitespace().collect();
        let set = parse_colors(ln, &rhs)?;
        match lhs.trim() {
            "*" => default = Some(set),
            v => {
                let v: Vertex = num(ln, v)?;
                if !g.contains(v) {
                    return err(ln, format!("vertex {v} is not in the graph"));
                }
                l.set(v, set);
            }
        }
    }
    if let Some(d) = default {
        for v in g.vertices() {
            if !l.iter().any(|(u, _)| u == v) {
                l.set(v, d);
            }
        }
    }
    Ok(l)
}

pub fn write_lists(l: &ListAssignment) -> String {
    let mut s = String::new();
    for (v, set) in l.iter() {
        let _ = write!(s, "{v} :");
        for c in set.iter() {
            let _ = write!(s, " {c}");
        }
        s.push('\n');
    }
    s
}

pub fn write_witness(c: &Coloring) -> String {
    c.0.iter().map(|(v, col)| format!("{v} {col}\n")).collect()
}

pub fn parse_witness(text: &str) -> Result<Coloring, ParseError> {
    let mut c = Coloring::default();
    for (ln, toks) in lines(text) {
        if toks.len() != 2 {
            return err(ln, "expected `<vertex> <color>`");
        }
        c.0.insert(num(ln, toks[0])?, num(ln, toks[1])?);
    }
    Ok(c)
}

/// Whitespace-separated vertex ids.
pub fn parse_vertex_set(text: &str) -> Result<Vec<Vertex>, ParseError> {
    let mut out = Vec::new();
    for (ln, toks) in lines(text) {
        out.extend(nums::<Vertex>(ln, &toks)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// PACE `.td`: bag ids are 1-based, vertex ids are written as they are.
pub fn write_td(td: &TreeDecomposition) -> String {
    let mut verts: Vec<Vertex> = td.bags.iter().flatten().copied().collect();
    verts.sort_unstable();
    verts.dedup();
    let maxb = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("s td {} {} {}\n", td.bags.len(), maxb, verts.len());
    for (i, b) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in b {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, ParseError> {
    let mut declared = None;
    let mut bags: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
    let mut edges = Vec::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "c" => {}
            "s" => {
                if toks.len() != 5 || toks[1] != "td" {
                    return err(ln, "expected `s td <bags> <max bag> <vertices>`");
                }
                declared = Some((ln, num::<usize>(ln, toks[2])?));
            }
            "b" => {
                if toks.len() < 2 {
                    return err(ln, "expected `b <id> <vertices>`");
                }
                let id: usize = num(ln, toks[1])?;
                if id == 0 || bags.insert(id, nums(ln, &toks[2..])?).is_some() {
                    return err(ln, format!("bad or repeated bag id {id}"));
                }
            }
            _ => {
                if toks.len() != 2 {
                    return err(ln, "expected a tree edge `<bag> <bag>`");
                }
                let (a, b): (usize, usize) = (num(ln, toks[0])?, num(ln, toks[1])?);
                if a == 0 || b == 0 {
                    return err(ln, "bag ids are 1-based");
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let Some((sl, nb)) = declared else { return err(0, "missing `s td` line") };
    if bags.len() != nb || bags.keys().copied().ne(1..=nb) {
        return err(sl, format!("declared {nb} bags numbered 1..={nb}, found {}", bags.len()));
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= nb || b >= nb) {
        return err(0, format!("tree edge {} {} names a missing bag", a + 1, b + 1));
    }
    Ok(TreeDecomposition::new(bags.into_values().collect(), edges))
}

/// Pieces file. Sections start with `PIECE <id>` (followed by `v` lines),
/// `VORTEX <piece> <depth>` (followed by `X <i> <bag>`, one `B <boundary>` line
/// and `E <u> <v>` vortex edges), `APEX <piece> <restricted|free> <vertices>`
/// (followed by `E <u> <v>` apex edges), and `SUM <p> <q> <shared> [DROP <u> <v> ...]`.
pub fn parse_pieces(text: &str) -> Result<CliqueSumDecomposition, ParseError> {
    enum Sec {
        None,
        Piece(usize),
        Vortex(usize),
        Apex(usize),
    }
    struct Draft {
        rots: Vec<(Vertex, Vec<Vertex>)>,
        line: usize,
        vortices: Vec<(usize, usize, BTreeMap<usize, Vec<Vertex>>, Option<Vec<Vertex>>, Vec<(Vertex, Vertex)>)>,
        apices: Vec<(Vertex, ApexKind)>,
        apex_edges: Vec<(Vertex, Vertex)>,
    }
    let mut drafts: BTreeMap<usize, Draft> = BTreeMap::new();
    let mut sums = Vec::new();
    let mut sec = Sec::None;
    let piece = |drafts: &mut BTreeMap<usize, Draft>, ln: usize, p: usize| -> Result<(), ParseError> {
        if drafts.contains_key(&p) {
            Ok(())
        } else {
            err(ln, format!("piece {p} is not declared before this line"))
        }
    };
    for (ln, toks) in lines(text) {
        match toks[0] {
            "PIECE" => {
                if toks.len() != 2 {
                    return err(ln, "expected `PIECE <id>`");
                }
                let id: usize = num(ln, toks[1])?;
                let d = Draft { rots: vec![], line: ln, vortices: vec![], apices: vec![], apex_edges: vec![] };
                if drafts.insert(id, d).is_some() {
                    return err(ln, format!("piece {id} declared twice"));
                }
                sec = Sec::Piece(id);
            }
            "planar_rotation" if matches!(sec, Sec::Piece(_)) => {
                if toks.get(1) != Some(&"1") {
                    return err(ln, "pieces need `planar_rotation 1`");
                }
            }
            "v" => {
                let Sec::Piece(p) = sec else { return err(ln, "`v` line outside a PIECE section") };
                if toks.len() < 2 {
                    return err(ln, "expected `v <id> <neighbors>`");
                }
                let v = num(ln, toks[1])?;
                let nb = nums(ln, &toks[2..])?;
                drafts.get_mut(&p).unwrap().rots.push((v, nb));
            }
            "VORTEX" => {
                if toks.len() != 3 {
                    return err(ln, "expected `VORTEX <piece> <depth>`");
                }
                let p: usize = num(ln, toks[1])?;
                piece(&mut drafts, ln, p)?;
                let depth = num(ln, toks[2])?;
                drafts.get_mut(&p).unwrap().vortices.push((ln, depth, BTreeMap::new(), None, vec![]));
                sec = Sec::Vortex(p);
            }
            "X" => {
                let Sec::Vortex(p) = sec else { return err(ln, "`X` line outside a VORTEX section") };
                if toks.len() < 2 {
                    return err(ln, "expected `X <i> <vertices>`");
                }
                let i: usize = num(ln, toks[1])?;
                let vx = drafts.get_mut(&p).unwrap().vortices.last_mut().unwrap();
                if vx.2.insert(i, nums(ln, &toks[2..])?).is_some() {
                    return err(ln, format!("bag {i} repeated"));
                }
            }
            "B" => {
                let Sec::Vortex(p) = sec else { return err(ln, "`B` line outside a VORTEX section") };
                let vx = drafts.get_mut(&p).unwrap().vortices.last_mut().unwrap();
                if vx.3.replace(nums(ln, &toks[1..])?).is_some() {
                    return err(ln, "second boundary line in one vortex");
                }
            }
            "E" => {
                if toks.len() != 3 {
                    return err(ln, "expected `E <u> <v>`");
                }
                let e = (num(ln, toks[1])?, num(ln, toks[2])?);
                match sec {
                    Sec::Vortex(p) => drafts.get_mut(&p).unwrap().vortices.last_mut().unwrap().4.push(e),
                    Sec::Apex(p) => drafts.get_mut(&p).unwrap().apex_edges.push(e),
                    _ => return err(ln, "`E` line outside a VORTEX or APEX section"),
                }
            }
            "APEX" => {
                if toks.len() < 4 {
                    return err(ln, "expected `APEX <piece> <restricted|free> <vertices>`");
                }
                let p: usize = num(ln, toks[1])?;
                piece(&mut drafts, ln, p)?;
                let kind = match toks[2] {
                    "restricted" => ApexKind::Restricted,
                    "free" => ApexKind::Free,
                    k => return err(ln, format!("apex kind must be restricted or free, found `{k}`")),
                };
                let vs: Vec<Vertex> = nums(ln, &toks[3..])?;
                drafts.get_mut(&p).unwrap().apices.extend(vs.into_iter().map(|v| (v, kind)));
                sec = Sec::Apex(p);
            }
            "SUM" => {
                if toks.len() < 3 {
                    return err(ln, "expected `SUM <p> <q> <shared> [DROP <u> <v> ...]`");
                }
                let (a, b): (usize, usize) = (num(ln, toks[1])?, num(ln, toks[2])?);
                let split = toks.iter().position(|&t| t == "DROP").unwrap_or(toks.len());
                let shared = nums(ln, &toks[3..split])?;
                let drop: Vec<Vertex> = if split < toks.len() { nums(ln, &toks[split + 1..])? } else { vec![] };
                if drop.len() % 2 == 1 {
                    return err(ln, "DROP needs vertex pairs");
                }
                let dropped = drop.chunks(2).map(|c| (c[0], c[1])).collect();
                sums.push(CliqueSum { a, b, shared, dropped });
                sec = Sec::None;
            }
            other => return err(ln, format!("unexpected `{other}`")),
        }
    }
    if drafts.is_empty() {
        return err(0, "no PIECE sections");
    }
    let mut pieces = Vec::new();
    for (expect, (id, d)) in drafts.into_iter().enumerate() {
        if id != expect {
            return err(d.line, format!("piece ids must be 0, 1, 2, ...; found {id}"));
        }
        let embedded =
            PlaneGraph::from_rotations(d.rots).map_err(|e| ParseError { line: d.line, msg: e.to_string() })?;
        let mut vortices = Vec::new();
        for (vl, depth, bags, boundary, edges) in d.vortices {
            let Some(boundary) = boundary else { return err(vl, "vortex without a `B` line") };
            vortices.push(Vortex { path: VortexPathDecomposition::new(bags.into_values().collect(), boundary, depth), edges });
        }
        pieces.push(AlmostEmbeddedPiece { embedded, vortices, apices: d.apices, apex_edges: d.apex_edges });
    }
    Ok(CliqueSumDecomposition { pieces, sums })
}

pub fn write_pieces(dec: &CliqueSumDecomposition) -> String {
    let mut s = String::new();
    for (i, p) in dec.pieces.iter().enumerate() {
        let _ = writeln!(s, "PIECE {i}");
        for v in p.embedded.vertices() {
            write_vertex_line(&mut s, v, p.embedded.rotation(v));
        }
    }
    for (i, p) in dec.pieces.iter().enumerate() {
        for vx in &p.vortices {
            let _ = writeln!(s, "VORTEX {i} {}", vx.path.depth);
            for (j, b) in vx.path.bags.iter().enumerate() {
                let _ = writeln!(s, "X {} {}", j + 1, join(b));
            }
            let _ = writeln!(s, "B {}", join(&vx.path.boundary));
            for (u, v) in &vx.edges {
                let _ = writeln!(s, "E {u} {v}");
            }
        }
        for kind in [ApexKind::Restricted, ApexKind::Free] {
            let vs: Vec<Vertex> = p.apices.iter().filter(|a| a.1 == kind).map(|a| a.0).collect();
            if vs.is_empty() {
                continue;
            }
            let _ = writeln!(s, "APEX {i} {} {}", kind.name(), join(&vs));
            for (u, v) in p.apex_edges.iter().filter(|(u, v)| vs.contains(u) || vs.contains(v)) {
                let _ = writeln!(s, "E {u} {v}");
            }
        }
    }
    for sum in &dec.sums {
        let _ = write!(s, "SUM {} {} {}", sum.a, sum.b, join(&sum.shared));
        if !sum.dropped.is_empty() {
            s.push_str(" DROP");
            for (u, v) in &sum.dropped {
                let _ = write!(s, " {u} {v}");
            }
        }
        s.push('\n');
    }
    s
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// DIMACS `p cnf` clauses (1-based, `0`-terminated) with layout lines
/// `rot v <var> <clauses>` and `rot c <clause> <vars>`, all 1-based.
pub fn parse_cnf(text: &str) -> Result<PlanarCnf, ParseError> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut var_rot: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut clause_rot: BTreeMap<usize, [usize; 3]> = BTreeMap::new();
    for (ln, toks) in lines(text) {
        match toks[0] {
            "c" => {}
            "p" => {
                if toks.len() != 4 || toks[1] != "cnf" {
                    return err(ln, "expected `p cnf <vars> <clauses>`");
                }
                header = Some((ln, num::<usize>(ln, toks[2])?, num::<usize>(ln, toks[3])?));
            }
            "rot" => {
                if toks.len() < 3 {
                    return err(ln, "expected `rot v|c <id> <ids>`");
                }
                let id: usize = num(ln, toks[2])?;
                let ids: Vec<usize> = nums(ln, &toks[3..])?;
                if id == 0 || ids.contains(&0) {
                    return err(ln, "layout ids are 1-based");
                }
                let ids: Vec<usize> = ids.into_iter().map(|i| i - 1).collect();
                match toks[1] {
                    "v" => {
                        if var_rot.insert(id - 1, ids).is_some() {
                            return err(ln, format!("variable {id} has two rotations"));
                        }
                    }
                    "c" => {
                        let arr: [usize; 3] =
                            ids.try_into().map_err(|_| ParseError { line: ln, msg: "clause rotation needs 3 variables".into() })?;
                        if clause_rot.insert(id - 1, arr).is_some() {
                            return err(ln, format!("clause {id} has two rotations"));
                        }
                    }
                    k => return err(ln, format!("expected `rot v` or `rot c`, found `rot {k}`")),
                }
            }
            _ => {
                let lits: Vec<i64> = nums(ln, &toks)?;
                if lits.len() != 4 || lits[3] != 0 || lits[..3].contains(&0) {
                    return err(ln, "clauses have exactly three literals followed by 0");
                }
                let l = |x: i64| Literal { var: x.unsigned_abs() as usize - 1, negated: x < 0 };
                clauses.push((ln, [l(lits[0]), l(lits[1]), l(lits[2])]));
            }
        }
    }
    let Some((hl, nv, nc)) = header else { return err(0, "missing `p cnf` line") };
    if clauses.len() != nc {
        return err(hl, format!("header declares {nc} clauses, found {}", clauses.len()));
    }
    if let Some((ln, _)) = clauses.iter().find(|(_, c)| c.iter().any(|l| l.var >= nv)) {
        return err(*ln, format!("variable out of range 1..={nv}"));
    }
    let var_rotation: Vec<Vec<usize>> = (0..nv).map(|v| var_rot.remove(&v).unwrap_or_default()).collect();
    if let Some((&v, _)) = var_rot.iter().next() {
        return err(0, format!("rotation for unknown variable {}", v + 1));
    }
    let mut clause_rotation = Vec::new();
    for c in 0..nc {
        match clause_rot.remove(&c) {
            Some(r) => clause_rotation.push(r),
            None => return err(clauses[c].0, format!("clause {} has no `rot c` line", c + 1)),
        }
    }
    let cnf = PlanarCnf { num_vars: nv, clauses: clauses.into_iter().map(|c| c.1).collect(), var_rotation, clause_rotation };
    cnf.validate().map_err(|e| ParseError { line: 0, msg: e.to_string() })?;
    Ok(cnf)
}

pub fn write_cnf(cnf: &PlanarCnf) -> String {
    let mut s = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for cl in &cnf.clauses {
        for l in cl {
            let x = l.var as i64 + 1;
            let _ = write!(s, "{} ", if l.negated { -x } else { x });
        }
        s.push_str("0\n");
    }
    for (v, r) in cnf.var_rotation.iter().enumerate() {
        let _ = writeln!(s, "rot v {} {}", v + 1, r.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(" "));
    }
    for (c, r) in cnf.clause_rotation.iter().enumerate() {
        let _ = writeln!(s, "rot c {} {}", c + 1, r.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" "));
    }
    s
}

/// Gadget catalog: `gadget <k> <allowed patterns, comma separated or -> x <a> <b> <c>`,
/// then `e <u> <v>` lines, then `end`.
pub fn write_catalog(gadgets: &[GadgetInstance]) -> String {
    let mut s = String::new();
    for g in gadgets {
        let pats: Vec<&str> = g.family.allowed().iter().map(|p| p.name()).collect();
        let pats = if pats.is_empty() { "-".to_string() } else { pats.join(",") };
        let _ = writeln!(s, "gadget {} {} x {} {} {}", g.k, pats, g.x[0], g.x[1], g.x[2]);
        for (u, v) in g.graph.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s.push_str("end\n");
    }
    s
}

pub fn parse_catalog(text: &str) -> Result<Vec<GadgetInstance>, ParseError> {
    let mut out = Vec::new();
    let mut cur: Option<(usize, GadgetInstance)> = None;
    for (ln, toks) in lines(text) {
        match toks[0] {
            "gadget" => {
                if cur.is_some() {
                    return err(ln, "previous gadget has no `end`");
                }
                if toks.len() != 7 || toks[3] != "x" {
                    return err(ln, "expected `gadget <k> <patterns> x <a> <b> <c>`");
                }
                let k: usize = num(ln, toks[1])?;
                if !(3..=MAX_COLOR as usize).contains(&k) {
                    return err(ln, format!("k = {k} outside 3..={MAX_COLOR}"));
                }
                let mut allowed = Vec::new();
                if toks[2] != "-" {
                    for p in toks[2].split(',') {
                        allowed.push(Pattern::parse(p).ok_or(ParseError { line: ln, msg: format!("unknown pattern `{p}`") })?);
                    }
                }
                let x: [Vertex; 3] = [num(ln, toks[4])?, num(ln, toks[5])?, num(ln, toks[6])?];
                let mut graph = Graph::default();
                for v in x {
                    graph.ensure_vertex(v);
                }
                cur = Some((ln, GadgetInstance { graph, x, k, family: PatternFamily::new(k, &allowed) }));
            }
            "e" => {
                let Some((_, g)) = cur.as_mut() else { return err(ln, "`e` outside a gadget") };
                if toks.len() != 3 {
                    return err(ln, "expected `e <u> <v>`");
                }
                let (u, v): (Vertex, Vertex) = (num(ln, toks[1])?, num(ln, toks[2])?);
                if u == v {
                    return err(ln, "loop edge");
                }
                g.graph.add_edge(u, v);
            }
            "end" => match cur.take() {
                Some((_, g)) => out.push(g),
                None => return err(ln, "`end` without a gadget"),
            },
            other => return err(ln, format!("unexpected `{other}`")),
        }
    }
    if let Some((ln, _)) = cur {
        return err(ln, "gadget has no `end`");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::make_gadget;
    use crate::plane::generate_grid;
    use crate::reductions::unsat_fixture;

    #[test]
    fn embedding_round_trip() {
        let g = generate_grid(3, 4);
        let text = write_plane(&g);
        assert_eq!(parse_plane(&text).unwrap(), g);
        let plain = parse_graph(&write_plain(g.graph())).unwrap();
        assert_eq!(plain, GraphInput::Plain(g.graph().clone()));
    }

    #[test]
    fn embedding_errors_name_lines() {
        let bad = "planar_rotation 1\n# c\nv 0 1\nv 1 x\n";
        assert_eq!(parse_graph(bad).unwrap_err().line, 4);
        let asym = "planar_rotation 1\nv 0 1\nv 1\n";
        let e = parse_graph(asym).unwrap_err();
        assert_eq!(e.line, 2, "{e}");
    }

    #[test]
    fn dimacs() {
        let g = parse_graph("c hi\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        let g = g.graph();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(g.has_edge(1, 2) && g.has_edge(2, 3));
        assert!(parse_graph("p edge 3 2\ne 1 2\n").is_err());
    }

    #[test]
    fn lists_and_witness() {
        let g = Graph::path(3);
        let l = parse_lists("*: 1 2 3\n1 : 4 5\n", &g).unwrap();
        assert_eq!(l.get(0), ColorSet::range(3));
        assert_eq!(l.get(1), [4, 5].into_iter().collect());
        assert_eq!(parse_lists(&write_lists(&l), &g).unwrap(), l);
        assert_eq!(parse_lists("0 : 64\n", &g).unwrap_err().line, 1);
        let c = Coloring([(0, 1), (1, 4), (2, 2)].into_iter().collect());
        assert_eq!(parse_witness(&write_witness(&c)).unwrap(), c);
    }

    #[test]
    fn td_round_trip() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let text = write_td(&td);
        assert!(text.starts_with("s td 2 2 3\n"));
        assert_eq!(parse_td(&text).unwrap(), td);
        assert!(parse_td("s td 2 2 3\nb 1 0 1\n").is_err());
    }

    #[test]
    fn cnf_round_trip() {
        let f = unsat_fixture();
        assert_eq!(parse_cnf(&write_cnf(&f)).unwrap(), f);
        assert!(parse_cnf("p cnf 3 1\n1 2 0\nrot c 1 1 2 3\n").is_err());
    }

    #[test]
    fn catalog_round_trip() {
        let gs: Vec<_> = [0b10001u8, 0b00110, 0].iter().map(|&m| make_gadget(PatternFamily::from_mask(4, m)).unwrap()).collect();
        assert_eq!(parse_catalog(&write_catalog(&gs)).unwrap(), gs);
    }
}
