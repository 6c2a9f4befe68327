//! From BPSP to weighted MaxCut and to an Ising Hamiltonian.
//!
//! Vertices are 0-based in the API (`vertex = symbol - 1`) and 1-based in
//! the text exports.

mod graph;
mod ising;
mod maxcut;

pub use graph::{build_graph, theta, BpspGraph};
pub use ising::{build_ising, IsingHamiltonian};
pub use maxcut::{bpsp_via_maxcut, BruteForceMaxCut, MaxCutBackend, MaxCutSolution, MAX_BRUTE_FORCE_VERTICES};
