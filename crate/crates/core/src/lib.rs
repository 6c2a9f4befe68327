//! Solvers and analysis tools for the binary paint shop problem (BPSP).
//!
//! An instance is a double-occurrence word: a sequence of `2n` cars in which
//! each of the `n` car models appears exactly twice. Every model has to be
//! painted once red and once blue, and the goal is to minimise the number of
//! colour changes along the sequence.
//!
//! The crate is organised bottom-up:
//!
//! * [`instances`] and [`seed`]: instance validation, generation, text I/O.
//! * [`encoding`]: full colourings, the n-bit initial-car-colour (ICC)
//!   encoding and the three equivalent cost functions.
//! * [`heuristics`]: red-first, greedy, recursive greedy, recursive star greedy.
//! * [`reduction`]: the BPSP graph, cut weights, MaxCut backends and the
//!   Ising Hamiltonian.
//! * [`oracles`]: exhaustive BPSP search and a dense depth-1 state-vector
//!   simulator used as ground truth.
//! * [`qaoa`]: closed-form QAOA₁ and lightcone XQAOA₁ expectation engines,
//!   gradients and optimisers.
//! * [`rqaoa`]: recursive correlation rounding on top of QAOA₁.
//! * [`solver`]: the named solver registry used by the CLI and the harness.
//! * [`bench`]: the reproducible benchmark harness.
//! * [`validate`]: the cross-module invariant suite.

pub mod bench;
pub mod encoding;
pub mod error;
pub mod heuristics;
pub mod instances;
pub mod oracles;
pub mod qaoa;
pub mod reduction;
pub mod rqaoa;
pub mod seed;
pub mod solver;
pub mod validate;

pub use encoding::{FullColoring, IccColoring, Paint, SpinAssignment};
pub use error::{Error, Result};
pub use instances::BpspInstance;
pub use reduction::{BpspGraph, IsingHamiltonian};
pub use seed::Seed;
