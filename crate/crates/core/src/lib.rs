//! Exact weighted Subset Feedback Vertex Set (SFVS) solvers.
//!
//! Given a graph, non-negative vertex weights and a special set `S`, find a
//! lightest vertex set `X` whose removal leaves no cycle through any vertex of
//! `S`. Equivalently, find a heaviest S-forest `Y = V \ X`.
//!
//! Solvers exist for interval, circular-arc, permutation and co-bipartite
//! models, plus an exhaustive oracle and seeded instance generators used for
//! differential testing.

pub mod circular_arc;
pub mod cobipartite;
pub mod error;
pub mod gen;
pub mod graph;
pub mod interval;
pub mod model;
pub mod oracle;
pub mod permutation;
pub mod solution;

pub use error::{ModelError, SolveError};
pub use graph::{is_s_forest, lies_on_cycle, Graph};
pub use model::{
    build_adjacency, validate_model, CircularArcModel, EdgeListModel, Instance, IntervalModel, Kind, Model,
    PermutationModel, VertexId, Weight,
};
pub use solution::{Solution, SolverTag};

/// Dispatches on the model kind. Generic graphs go to the oracle.
pub fn solve_auto(inst: &Instance) -> Result<Solution, SolveError> {
    match inst.model.kind() {
        Kind::Interval => interval::solve_interval(inst),
        Kind::Permutation => permutation::solve_permutation(inst),
        Kind::CircularArc => circular_arc::solve_circular_arc(inst),
        Kind::CoBipartite => cobipartite::solve_cobipartite(inst),
        Kind::Generic => oracle::oracle_solve(inst),
    }
}
