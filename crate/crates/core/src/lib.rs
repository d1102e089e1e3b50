//! List coloring of embedded graphs: nest reduction, tree-decomposition dynamic
//! programming, exhaustive oracles, and the gadgets and reductions used for the
//! hardness side.

pub mod coloring;
pub mod gadgets;
pub mod connectivity;
pub mod decomposition;
pub mod graph;
pub mod io;
pub mod nest;
pub mod pipeline;
pub mod plane;
pub mod reductions;
pub mod treewidth;

pub use graph::{add_universal_vertex, Graph, Vertex};
pub use plane::{generate_grid, generate_random_planar, EmbeddingError, Face, PlaneGraph};
