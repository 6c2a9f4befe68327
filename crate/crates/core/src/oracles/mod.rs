//! Ground-truth engines for small systems: exhaustive BPSP and a dense
//! statevector simulator for depth-1 circuits.

mod bruteforce;
mod statevector;

pub use bruteforce::{bpsp_bruteforce, BruteForceSolution};
pub use statevector::{sample_bitstrings, simulate_p1, CircuitSpec, PhaseTerm, QuantumStateReport, MAX_QUBITS};
