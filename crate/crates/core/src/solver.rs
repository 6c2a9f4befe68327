//! Named solver registry. Every algorithm sits behind [`Solver`] and is
//! looked up by its frozen name at runtime.

use crate::encoding::{expand, icc_swap_count_spin, swap_count, FullColoring, IccColoring, SpinAssignment};
use crate::error::{Error, Result};
use crate::heuristics::{greedy, recursive_greedy, recursive_star_greedy, red_first};
use crate::instances::BpspInstance;
use crate::oracles::{bpsp_bruteforce, sample_bitstrings, CircuitSpec, MAX_QUBITS};
use crate::qaoa::{qaoa1_optimize, xqaoa_solve, MixerKind, XqaoaOptions};
use crate::reduction::build_ising;
use crate::rqaoa::{rqaoa_solve, DEFAULT_CUTOFF};
use crate::seed::Seed;

pub const SOLVER_NAMES: [&str; 8] = ["rf", "greedy", "rg", "rsg", "qaoa1", "xqaoa", "rqaoa", "brute"];

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// XQAOA random restarts.
    pub restarts: usize,
    pub mixer: MixerKind,
    /// RQAOA brute-force cutoff.
    pub cutoff: usize,
    /// Measurement shots for `qaoa1`.
    pub shots: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { restarts: 10, mixer: MixerKind::XEqY, cutoff: DEFAULT_CUTOFF, shots: 1024 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    pub cost: usize,
    pub coloring: FullColoring,
    /// Restarts that contributed (1 for single-shot algorithms).
    pub restarts: usize,
    /// Rounded cost of each restart, for multi-start solvers.
    pub restart_costs: Vec<usize>,
}

impl SolveOutcome {
    fn single(coloring: FullColoring) -> Self {
        SolveOutcome { cost: swap_count(&coloring), coloring, restarts: 1, restart_costs: Vec::new() }
    }
}

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, x: &BpspInstance, seed: Seed) -> Result<SolveOutcome>;
}

struct Heuristic {
    name: &'static str,
    run: fn(&BpspInstance) -> FullColoring,
}

impl Solver for Heuristic {
    fn name(&self) -> &'static str {
        self.name
    }

    fn solve(&self, x: &BpspInstance, _seed: Seed) -> Result<SolveOutcome> {
        Ok(SolveOutcome::single((self.run)(x)))
    }
}

struct Brute;

impl Solver for Brute {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn solve(&self, x: &BpspInstance, _seed: Seed) -> Result<SolveOutcome> {
        Ok(SolveOutcome::single(bpsp_bruteforce(x)?.coloring))
    }
}

/// Optimised QAOA_1 followed by measurement of the exact state. The state is
/// symmetric under a global spin flip, so its `⟨Z_j⟩` carry no information
/// and rounding is not an option; the best of `shots` samples is returned.
struct Qaoa1 {
    shots: usize,
}

impl Solver for Qaoa1 {
    fn name(&self) -> &'static str {
        "qaoa1"
    }

    fn solve(&self, x: &BpspInstance, seed: Seed) -> Result<SolveOutcome> {
        if x.n() > MAX_QUBITS {
            return Err(Error::TooLarge { what: "qaoa1 sampling", max: MAX_QUBITS, got: x.n() });
        }
        let h = build_ising(x);
        let p = qaoa1_optimize(&h);
        let samples = sample_bitstrings(&CircuitSpec::qaoa1(&h, p.beta, p.gamma), self.shots.max(1), seed)?;
        let best = samples
            .into_iter()
            .map(|bits| {
                let z = IccColoring::from_bits(bits, x.n());
                let cost = icc_swap_count_spin(x, &SpinAssignment::from(&z)).expect("lengths match");
                (cost, z)
            })
            .min_by_key(|(c, _)| *c)
            .expect("at least one shot");
        Ok(SolveOutcome { cost: best.0, coloring: expand(x, &best.1)?, restarts: 1, restart_costs: Vec::new() })
    }
}

struct Xqaoa {
    options: XqaoaOptions,
}

impl Solver for Xqaoa {
    fn name(&self) -> &'static str {
        "xqaoa"
    }

    fn solve(&self, x: &BpspInstance, seed: Seed) -> Result<SolveOutcome> {
        let sol = xqaoa_solve(x, &self.options, seed)?;
        let restart_costs = sol
            .restarts
            .iter()
            .map(|r| icc_swap_count_spin(x, &r.spins))
            .collect::<Result<Vec<_>>>()?;
        Ok(SolveOutcome { cost: sol.cost, coloring: sol.coloring, restarts: sol.restarts.len(), restart_costs })
    }
}

struct Rqaoa {
    cutoff: usize,
}

impl Solver for Rqaoa {
    fn name(&self) -> &'static str {
        "rqaoa"
    }

    fn solve(&self, x: &BpspInstance, _seed: Seed) -> Result<SolveOutcome> {
        let sol = rqaoa_solve(x, self.cutoff)?;
        Ok(SolveOutcome { cost: sol.cost, coloring: sol.coloring, restarts: 1, restart_costs: Vec::new() })
    }
}

/// Looks a solver up by name.
pub fn solver(name: &str, opts: &SolverOptions) -> Result<Box<dyn Solver>> {
    let heuristic = |name, run| -> Result<Box<dyn Solver>> { Ok(Box::new(Heuristic { name, run })) };
    match name {
        "rf" => heuristic("rf", red_first),
        "greedy" => heuristic("greedy", greedy),
        "rg" => heuristic("rg", recursive_greedy),
        "rsg" => heuristic("rsg", recursive_star_greedy),
        "brute" => Ok(Box::new(Brute)),
        "qaoa1" => Ok(Box::new(Qaoa1 { shots: opts.shots })),
        "xqaoa" => {
            if opts.restarts == 0 {
                return Err(Error::Config("restarts must be at least 1".into()));
            }
            let options = XqaoaOptions { restarts: opts.restarts, kind: opts.mixer, ..Default::default() };
            Ok(Box::new(Xqaoa { options }))
        }
        "rqaoa" => Ok(Box::new(Rqaoa { cutoff: opts.cutoff })),
        other => Err(Error::UnknownAlgorithm(other.to_string())),
    }
}
