//! Synthesis of pure multiqubit states whose pairwise entanglement
//! realizes a prescribed weighted graph.
//!
//! Vertices are qubits; an edge weight is the target Wootters concurrence
//! of that qubit pair. The crate provides, in dependency order:
//!
//! * [`quantum`]: dense state vectors, reduced density matrices, and an
//!   independent concurrence oracle (`wootters_concurrence`) everything
//!   else is verified against;
//! * [`graph`]: the weighted target graph, its per-edge feasibility bound,
//!   and the graph file format;
//! * [`ansatz`]: the two-amplitude-per-edge state family, its closed-form
//!   and measured pair concurrences, and the parameter file format;
//! * [`solver`]: the per-edge sweep that drives measured concurrences onto
//!   the targets, plus verification reports;
//! * [`circuit`]: compilation of a solved parameter set into a quantum
//!   gate network (a faithful rendering of the published transfer network,
//!   and a corrected rotation chain that provably prepares the state);
//! * [`simulator`]: a dense gate-level simulator used to check circuits
//!   end to end;
//! * [`cli`]: the command-line front end (`validate`, `solve`, `circuit`,
//!   `simulate`, `concurrence`).
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability.

pub mod ansatz;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod format;
pub mod graph;
pub mod quantum;
pub mod simulator;
pub mod solver;

pub use ansatz::AnsatzParams;
pub use error::{Error, Result};
pub use graph::{c_max, EntangledGraph, ValidationReport};
pub use quantum::{StateVector, TwoQubitDensity};
pub use solver::{solve, solve_from, verify, SolveConfig, SweepMode};
