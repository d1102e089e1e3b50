//! Hardness constructions: planar 3-coloring to 4-list-coloring of 4-connected
//! planar graphs, planar 3-SAT to 5-coloring, and apex lifting.

mod hard1;
mod sat;

pub use hard1::{precolor_attach, quasiedge_replace, small_critical_graph, wheel_fill, CriticalError, CriticalGraphInput};
pub use sat::{
    coloring_from_assignment, desk_corpus, doubled_single_clause, extend_skeleton, planar3sat_to_coloring,
    single_clause, solve_skeleton, unsat_fixture, CnfError, GPhi, GadgetUse, HardFamily, Literal, PlanarCnf,
    VarStructure, UNSAT_FIXTURE,
};

use crate::graph::{add_universal_vertex, Graph, Vertex};

/// Adds `t` universal vertices; the palette grows from `k` to `k + t`.
pub fn lift_apex(g: &Graph, k: usize, t: usize) -> (Graph, usize, Vec<Vertex>) {
    let mut out = g.clone();
    let mut added = Vec::new();
    for _ in 0..t {
        let (h, u) = add_universal_vertex(&out);
        out = h;
        added.push(u);
    }
    (out, k + t, added)
}
