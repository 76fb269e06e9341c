//! Semistrong and (0,1)-relaxed strong edge colorings.
//!
//! The crate builds colorings with at most Δ²−1 colors by greedy coloring
//! followed by local repair, verifies matching-based coloring notions, and
//! computes exact indices of small graphs by backtracking.

pub mod construct;
pub mod exact;
pub mod families;
pub mod graph;
pub mod io;
pub mod neighborhood;
pub mod solver;
pub mod verifier;

pub use graph::{build_graph, connected_components, max_degree, ComponentView, Graph, GraphError};
pub use neighborhood::{compute_neighborhood, EdgeNeighborhood, NeighborhoodCache, TypeClass};
pub use verifier::{
    badness, is_good_coloring, verify_relaxed, verify_semistrong, verify_strong, BadnessReport, Coloring,
    Verdict, Witness,
};
pub use exact::{exact_index, feasibility, Budget, ExactResult, Feasibility, Mode, Proof};
pub use solver::{solve, solve_with, RepairConfig, SolveMode, SolveResult, Strategy};
