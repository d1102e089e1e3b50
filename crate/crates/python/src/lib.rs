//! Python bindings for `nestcolor`.

use nestcolor::coloring::{self, Color, ColorSet, Coloring, ListAssignment, MAX_COLOR};
use nestcolor::decomposition::CliqueSumDecomposition;
use nestcolor::gadgets::{self, Pattern, PatternFamily};
use nestcolor::graph::{Graph, Vertex};
use nestcolor::io;
use nestcolor::nest;
use nestcolor::pipeline::{self, KPolicy, SolveConfig};
use nestcolor::plane::PlaneGraph;
use nestcolor::reductions;
use nestcolor::treewidth::{self, TreeDecomposition};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::collections::BTreeMap;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Graph", module = "nestcolor_py", from_py_object)]
#[derive(Clone)]
pub struct PyGraph(Graph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> PyResult<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u == v) {
            return Err(value_err(format!("loop at {u}-{v}")));
        }
        let bound = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0).max(n);
        Ok(PyGraph(Graph::from_edges(bound, &edges)))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_graph(text).map(|g| PyGraph(g.graph().clone())).map_err(value_err)
    }

    fn to_text(&self) -> String {
        io::write_plain(&self.0)
    }

    fn num_vertices(&self) -> usize {
        self.0.num_vertices()
    }

    fn num_edges(&self) -> usize {
        self.0.num_edges()
    }

    fn vertices(&self) -> Vec<Vertex> {
        self.0.vertices().collect()
    }

    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.0.edges().collect()
    }

    fn neighbors(&self, v: Vertex) -> PyResult<Vec<Vertex>> {
        if !self.0.contains(v) {
            return Err(value_err(format!("no vertex {v}")));
        }
        Ok(self.0.neighbors(v).to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Graph(vertices={}, edges={})", self.0.num_vertices(), self.0.num_edges())
    }
}

#[pyclass(name = "PlaneGraph", module = "nestcolor_py", from_py_object)]
#[derive(Clone)]
pub struct PyPlaneGraph(PlaneGraph);

#[pymethods]
impl PyPlaneGraph {
    /// `rotations` maps each vertex to its clockwise neighbor order.
    #[new]
    fn new(rotations: BTreeMap<Vertex, Vec<Vertex>>) -> PyResult<Self> {
        let pg = PlaneGraph::from_rotations(rotations.into_iter().collect()).map_err(value_err)?;
        pg.validate().map_err(value_err)?;
        Ok(PyPlaneGraph(pg))
    }

    #[staticmethod]
    fn grid(rows: usize, cols: usize) -> Self {
        PyPlaneGraph(nestcolor::generate_grid(rows, cols))
    }

    #[staticmethod]
    fn random(n: usize, seed: u64) -> Self {
        PyPlaneGraph(nestcolor::generate_random_planar(n, seed))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_plane(text).map(PyPlaneGraph).map_err(value_err)
    }

    fn to_text(&self) -> String {
        io::write_plane(&self.0)
    }

    fn graph(&self) -> PyGraph {
        PyGraph(self.0.graph().clone())
    }

    fn num_vertices(&self) -> usize {
        self.0.num_vertices()
    }

    fn rotation(&self, v: Vertex) -> PyResult<Vec<Vertex>> {
        if !self.0.graph().contains(v) {
            return Err(value_err(format!("no vertex {v}")));
        }
        Ok(self.0.rotation(v).to_vec())
    }

    fn faces(&self) -> Vec<Vec<Vertex>> {
        self.0.faces().iter().map(|f| f.walk()).collect()
    }

    fn euler_genus(&self) -> PyResult<usize> {
        self.0.euler_genus().map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("PlaneGraph(vertices={}, edges={})", self.0.num_vertices(), self.0.num_edges())
    }
}

#[pyclass(name = "TreeDecomposition", module = "nestcolor_py", from_py_object)]
#[derive(Clone)]
pub struct PyTreeDecomposition(TreeDecomposition);

#[pymethods]
impl PyTreeDecomposition {
    #[new]
    fn new(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= bags.len() || b >= bags.len()) {
            return Err(value_err(format!("tree edge {a}-{b} names a missing bag")));
        }
        Ok(PyTreeDecomposition(TreeDecomposition::new(bags, edges)))
    }

    #[getter]
    fn bags(&self) -> Vec<Vec<Vertex>> {
        self.0.bags.clone()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges.clone()
    }

    fn width(&self) -> usize {
        self.0.width()
    }

    /// Width if valid for `graph`, `ValueError` naming the violation otherwise.
    fn validate(&self, graph: &PyGraph) -> PyResult<usize> {
        treewidth::validate_td(&graph.0, &self.0).map_err(value_err)
    }

    fn to_text(&self) -> String {
        io::write_td(&self.0)
    }
}

fn lists_from(g: &Graph, lists: Option<BTreeMap<Vertex, Vec<u32>>>) -> PyResult<ListAssignment> {
    let Some(lists) = lists else {
        return Ok(ListAssignment::uniform(g, ColorSet::range(5)));
    };
    let mut l = ListAssignment::new();
    for (v, cs) in lists {
        let mut set = ColorSet::EMPTY;
        for c in cs {
            if c == 0 || c > MAX_COLOR as u32 {
                return Err(value_err(format!("color {c} outside 1..={MAX_COLOR}")));
            }
            set.insert(c as Color);
        }
        l.set(v, set);
    }
    if let Some(v) = g.vertices().find(|&v| !l.iter().any(|(u, _)| u == v)) {
        return Err(value_err(format!("vertex {v} has no list")));
    }
    Ok(l)
}

fn coloring_out(c: Option<Coloring>) -> Option<BTreeMap<Vertex, Color>> {
    c.map(|c| c.0)
}

/// Decomposition from the default heuristic (exact below 13 vertices).
#[pyfunction]
fn decompose(graph: &PyGraph) -> PyTreeDecomposition {
    PyTreeDecomposition(treewidth::decompose(&graph.0))
}

/// Colors `graph` by dynamic programming; `lists` defaults to `{1..5}` everywhere.
#[pyfunction]
#[pyo3(signature = (graph, lists = None, td = None))]
fn list_color(
    graph: &PyGraph,
    lists: Option<BTreeMap<Vertex, Vec<u32>>>,
    td: Option<&PyTreeDecomposition>,
) -> PyResult<Option<BTreeMap<Vertex, Color>>> {
    let l = lists_from(&graph.0, lists)?;
    let c = match td {
        Some(td) => coloring::dp_list_color(&graph.0, &l, &td.0),
        None => coloring::list_color(&graph.0, &l),
    };
    c.map(coloring_out).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (graph, lists = None, cap = coloring::DEFAULT_ORACLE_CAP))]
fn brute_force_color(
    graph: &PyGraph,
    lists: Option<BTreeMap<Vertex, Vec<u32>>>,
    cap: usize,
) -> PyResult<Option<BTreeMap<Vertex, Color>>> {
    let l = lists_from(&graph.0, lists)?;
    coloring::brute_force_color_with(&graph.0, &l, cap).map(coloring_out).map_err(value_err)
}

/// Colorings of the sequence `x` that extend to the whole graph.
#[pyfunction]
#[pyo3(signature = (graph, x, lists = None))]
fn compute_phi(
    graph: &PyGraph,
    x: Vec<Vertex>,
    lists: Option<BTreeMap<Vertex, Vec<u32>>>,
) -> PyResult<Vec<Vec<Color>>> {
    let l = lists_from(&graph.0, lists)?;
    let phi = coloring::compute_phi(&graph.0, &l, &x).map_err(value_err)?;
    Ok(phi.members.into_iter().collect())
}

#[pyfunction]
fn paper_depth(n: usize) -> usize {
    nest::paper_depth(n)
}

/// Returns the reduced embedding and the removed vertices in removal order.
#[pyfunction]
fn nest_reduce(plane: &PyPlaneGraph, x: Vec<Vertex>, k: usize) -> (PyPlaneGraph, Vec<Vertex>) {
    let r = nest::nest_reduce(&plane.0, &x, k);
    (PyPlaneGraph(r.graph), r.removed)
}

#[derive(FromPyObject)]
enum SolveInput {
    Plane(PyPlaneGraph),
    Pieces(String),
}

/// Runs the full solver on an embedding or a pieces-file text and returns the
/// report as a dict. `k=None` uses the proven depth; a fixed `k` needs
/// `unsafe_k_ack=True`.
#[pyfunction]
#[pyo3(signature = (input, lists = None, k = None, unsafe_k_ack = false, cross_check = false, oracle_cap = coloring::DEFAULT_ORACLE_CAP, threads = 0, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    input: SolveInput,
    lists: Option<BTreeMap<Vertex, Vec<u32>>>,
    k: Option<usize>,
    unsafe_k_ack: bool,
    cross_check: bool,
    oracle_cap: usize,
    threads: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let dec = match input {
        SolveInput::Plane(pg) => CliqueSumDecomposition::single(pg.0),
        SolveInput::Pieces(text) => io::parse_pieces(&text).map_err(value_err)?,
    };
    let l = lists_from(&dec.graph(), lists)?;
    let cfg = SolveConfig {
        k: k.map_or(KPolicy::Paper, KPolicy::Fixed),
        unsafe_k_ack,
        cross_check,
        oracle_cap,
        threads,
        seed,
        ..Default::default()
    };
    let report = py.detach(|| pipeline::solve_pipeline(&dec, &l, &cfg)).map_err(value_err)?;
    let text = serde_json::to_string(&report).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Gadget whose admissible X-colorings avoid the `exclude` patterns
/// (names `AAA`, `AAB`, `ABA`, `ABB`, `ABC`). Returns `(graph, x)`.
#[pyfunction]
fn make_gadget(k: usize, exclude: Vec<String>) -> PyResult<(PyGraph, [Vertex; 3])> {
    let pats = exclude
        .iter()
        .map(|s| Pattern::parse(s).ok_or_else(|| value_err(format!("unknown pattern `{s}`"))))
        .collect::<PyResult<Vec<_>>>()?;
    let g = gadgets::make_gadget(PatternFamily::excluding(k, &pats)).map_err(value_err)?;
    gadgets::verify_gadget(&g).map_err(value_err)?;
    Ok((PyGraph(g.graph), g.x))
}

/// Graph for a planar 3-SAT file; 5-colorable iff the formula is satisfiable.
#[pyfunction]
fn reduce3sat(cnf: &str) -> PyResult<PyGraph> {
    let phi = io::parse_cnf(cnf).map_err(value_err)?;
    let g = reductions::planar3sat_to_coloring(&phi).map_err(value_err)?;
    Ok(PyGraph(g.graph))
}

/// Adds `t` universal vertices; returns the graph and the new palette size.
#[pyfunction]
fn lift_apex(graph: &PyGraph, k: usize, t: usize) -> (PyGraph, usize) {
    let (g, palette, _) = reductions::lift_apex(&graph.0, k, t);
    (PyGraph(g), palette)
}

#[pymodule]
fn nestcolor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPlaneGraph>()?;
    m.add_class::<PyTreeDecomposition>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(list_color, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_color, m)?)?;
    m.add_function(wrap_pyfunction!(compute_phi, m)?)?;
    m.add_function(wrap_pyfunction!(paper_depth, m)?)?;
    m.add_function(wrap_pyfunction!(nest_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(make_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(reduce3sat, m)?)?;
    m.add_function(wrap_pyfunction!(lift_apex, m)?)?;
    Ok(())
}
