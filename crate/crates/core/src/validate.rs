//! Cross-module invariant suite run on random instances. Backs the CLI's
//! `validate` command.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use rand::Rng;

use crate::encoding::{compress, expand, icc_swap_count, icc_swap_count_spin, is_valid_coloring, swap_count};
use crate::error::Result;
use crate::heuristics::{red_first, red_first_cost_via_eta};
use crate::instances::BpspInstance;
use crate::oracles::{bpsp_bruteforce, simulate_p1, CircuitSpec};
use crate::qaoa::{lightcone_pair_expectation, qaoa1_pair_expectation, MixerKind, Qaoa1Params, XqaoaParams};
use crate::reduction::{bpsp_via_maxcut, build_graph, build_ising, BruteForceMaxCut};
use crate::seed::Seed;
use crate::{IccColoring, SpinAssignment};

/// Largest instance the suite draws; keeps the brute-force and statevector
/// checks cheap.
pub const MAX_VALIDATION_N: usize = 12;
pub const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidateOptions {
    pub trials: usize,
    pub seed: u64,
    /// Corrupts one comparison per trial so the harness can prove it fails.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// `(passed, failed)` per check name.
    pub counts: BTreeMap<&'static str, (usize, usize)>,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn checks(&self) -> usize {
        self.counts.values().map(|(p, f)| p + f).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let entry = self.counts.entry(name).or_default();
        if ok {
            entry.0 += 1;
        } else {
            entry.1 += 1;
            self.failures.push(format!("{name}: {}", detail()));
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, (p, fail)) in &self.counts {
            writeln!(f, "{name:<20} {p:>6} passed {fail:>6} failed")?;
        }
        for msg in &self.failures {
            writeln!(f, "FAIL {msg}")?;
        }
        write!(f, "{} checks, {}", self.checks(), if self.passed() { "all passed" } else { "FAILED" })
    }
}

pub fn run_validation(opts: &ValidateOptions) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for trial in 0..opts.trials {
        let seed = Seed(opts.seed).derive(trial as u64);
        let mut rng = seed.derive(1).rng();
        let n = rng.gen_range(1..=MAX_VALIDATION_N);
        let x = BpspInstance::random(n, seed)?;
        check_instance(&x, &mut rng, opts.inject_fault, &mut report)?;
    }
    Ok(report)
}

fn check_instance(x: &BpspInstance, rng: &mut impl Rng, fault: bool, r: &mut ValidationReport) -> Result<()> {
    let n = x.n();
    let z = IccColoring::from_bits(rng.gen(), n);
    let spins = SpinAssignment::from(&z);
    let f = expand(x, &z)?;
    let cost = swap_count(&f);

    let roundtrip = is_valid_coloring(x, &f)? && compress(x, &f)? == z;
    r.record("bijection", roundtrip, || format!("{x}: expand/compress roundtrip broke for {z}"));

    let icc = icc_swap_count(x, &z)?;
    let spin = icc_swap_count_spin(x, &spins)?;
    r.record("icc-cost", icc == cost && spin == cost, || format!("{x}: swaps {cost}, icc {icc}, spin {spin}"));

    let g = build_graph(x);
    let dl = x.double_letter_count() as i64;
    let signs: i64 = x.etas().iter().map(|&e| if e == 1 { -1 } else { 1 }).sum();
    let structure = g.max_degree() <= 4
        && g.edges().iter().all(|&(_, _, w)| matches!(w, 1 | -1 | -2))
        && g.total_weight() == -dl - signs;
    r.record("graph-structure", structure, || format!("{x}: degree, weight set or total weight violated"));

    let rf = swap_count(&red_first(x));
    let rf_ok = rf == red_first_cost_via_eta(x) && 2 * rf as i64 == 2 * n as i64 - 1 + dl + g.total_weight();
    r.record("red-first", rf_ok, || format!("{x}: red-first cost {rf} disagrees with its identities"));

    let cut = g.cut_weight(&z)?;
    r.record("cut-identity", cost as i64 == rf as i64 - cut, || format!("{x}: swaps {cost} != {rf} - {cut}"));

    let h = build_ising(x);
    let e2 = h.energy_half_units(spins.spins())?;
    r.record("ising-energy", e2 == 2 * cost as i64, || format!("{x}: energy {} != swaps {cost}", e2 as f64 / 2.0));

    let (via, _) = bpsp_via_maxcut(x, &BruteForceMaxCut)?;
    let brute = bpsp_bruteforce(x)?.cost + fault as usize;
    r.record("reduction-vs-brute", via == brute, || format!("{x}: via max-cut {via}, brute force {brute}"));

    if h.num_couplings() > 0 {
        let pairs: Vec<(usize, usize)> = h.couplings().map(|(u, v, _)| (u, v)).collect();

        let p = Qaoa1Params::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
        let oracle = simulate_p1(&CircuitSpec::qaoa1(&h, p.beta, p.gamma), &pairs)?;
        let mut dev: f64 = 0.0;
        for (&(u, v), want) in pairs.iter().zip(&oracle.zz) {
            dev = dev.max((qaoa1_pair_expectation(&h, p, u, v)? - want).abs());
        }
        r.record("qaoa1-oracle", dev < ORACLE_TOLERANCE, || format!("{x}: deviation {dev:e}"));

        let kinds = [MixerKind::XEqY, MixerKind::X, MixerKind::Y, MixerKind::Xy];
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let m = h.num_couplings();
        let v: Vec<f64> = (0..XqaoaParams::free_count(kind, m, n)).map(|_| rng.gen_range(-PI..PI)).collect();
        let p = XqaoaParams::from_vector(kind, m, n, &v)?;
        let oracle = simulate_p1(&p.circuit(&h)?, &pairs)?;
        let mut dev: f64 = 0.0;
        for (&(u, v), want) in pairs.iter().zip(&oracle.zz) {
            dev = dev.max((lightcone_pair_expectation(&h, &p, u, v)? - want).abs());
        }
        r.record("xqaoa-oracle", dev < ORACLE_TOLERANCE, || format!("{x} ({kind}): deviation {dev:e}"));
    }
    Ok(())
}
