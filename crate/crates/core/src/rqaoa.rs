//! Recursive QAOA: repeatedly optimise QAOA_1, tie the most correlated
//! coupled pair together, and contract the Hamiltonian until a small
//! remainder can be enumerated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::encoding::{expand, icc_swap_count_spin, FullColoring, IccColoring, SpinAssignment};
use crate::error::{Error, Result};
use crate::instances::BpspInstance;
use crate::qaoa::{Qaoa1Model, Qaoa1Params};
use crate::reduction::{build_ising, BpspGraph, IsingHamiltonian, MaxCutBackend, MaxCutSolution};

pub const DEFAULT_CUTOFF: usize = 8;
const MAX_CUTOFF: usize = 24;
const DEGENERATE: f64 = 1e-12;

/// `Z_eliminated = sign · Z_representative`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub eliminated: usize,
    pub representative: usize,
    pub sign: i8,
}

/// A partially contracted Hamiltonian over the original spin labels, in
/// half units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedIsing {
    n: usize,
    active: BTreeSet<usize>,
    couplings2: BTreeMap<(usize, usize), i64>,
    offset2: i64,
    constraints: Vec<Constraint>,
}

impl ContractedIsing {
    pub fn new(h: &IsingHamiltonian) -> Self {
        ContractedIsing {
            n: h.n(),
            active: (0..h.n()).collect(),
            couplings2: h.couplings_half_units().iter().map(|&(u, v, k)| ((u, v), k)).collect(),
            offset2: h.offset_half_units(),
            constraints: Vec::new(),
        }
    }

    /// Original number of spins.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().copied()
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn offset_half_units(&self) -> i64 {
        self.offset2
    }

    pub fn couplings_half_units(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.couplings2.iter().map(|(&(u, v), &k)| (u, v, k))
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// The active part as a standalone Hamiltonian on `0..active_count`,
    /// with the original label of each new index.
    pub fn to_hamiltonian(&self) -> (IsingHamiltonian, Vec<usize>) {
        let labels: Vec<usize> = self.active.iter().copied().collect();
        let index = |q: usize| labels.binary_search(&q).expect("couplings reference active spins");
        let h = IsingHamiltonian::from_half_units(
            labels.len(),
            self.offset2,
            self.couplings2.iter().map(|(&(u, v), &k)| (index(u), index(v), k)),
        )
        .expect("relabelled couplings are valid");
        (h, labels)
    }

    /// Substitutes `Z_v = s Z_u` and removes `v`.
    pub fn contract(&mut self, u: usize, v: usize, sign: i8) -> Result<()> {
        if !self.active.contains(&u) || !self.active.contains(&v) || u == v {
            return Err(Error::VertexOutOfRange(if self.active.contains(&u) { v } else { u }));
        }
        let s = sign as i64;
        let touching: Vec<((usize, usize), i64)> =
            self.couplings2.iter().filter(|(&(a, b), _)| a == v || b == v).map(|(&p, &k)| (p, k)).collect();
        for ((a, b), k) in touching {
            self.couplings2.remove(&(a, b));
            let other = if a == v { b } else { a };
            if other == u {
                self.offset2 += s * k;
            } else {
                let key = (other.min(u), other.max(u));
                let merged = self.couplings2.get(&key).copied().unwrap_or(0) + s * k;
                if merged == 0 {
                    self.couplings2.remove(&key);
                } else {
                    self.couplings2.insert(key, merged);
                }
            }
        }
        self.active.remove(&v);
        self.constraints.push(Constraint { eliminated: v, representative: u, sign });
        Ok(())
    }

    /// Twice the energy of an assignment given on the active spins (entries
    /// for eliminated spins are ignored).
    pub fn energy_half_units(&self, z: &[i8]) -> Result<i64> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: z.len() });
        }
        Ok(self.offset2 + self.couplings2.iter().map(|(&(u, v), &k)| k * (z[u] * z[v]) as i64).sum::<i64>())
    }

    /// Fills in eliminated spins from the constraint stack, latest first.
    pub fn replay(&self, z: &mut [i8]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: z.len() });
        }
        for c in self.constraints.iter().rev() {
            z[c.eliminated] = c.sign * z[c.representative];
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub u: usize,
    pub v: usize,
    pub sign: i8,
    /// `|⟨Z_u Z_v⟩|` of the selected pair.
    pub correlation: f64,
    /// Every coupled pair had `|M| < 1e-12`; the sign was fixed to `+1`.
    pub degenerate: bool,
    pub params: Qaoa1Params,
    pub energy: f64,
}

impl fmt::Display for StepRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {:.12}", self.u + 1, self.v + 1, self.sign, self.correlation)?;
        if self.degenerate {
            f.write_str(" degenerate")?;
        }
        Ok(())
    }
}

/// One elimination: optimise QAOA_1 on the active part, pick the coupled
/// pair with the largest `|⟨Z_u Z_v⟩|` (earliest pair on ties) and
/// eliminate its larger label.
pub fn rqaoa_step(c: &ContractedIsing) -> Result<(ContractedIsing, StepRecord)> {
    if c.active_count() < 2 {
        return Err(Error::TooFewVariables);
    }
    if c.couplings2.is_empty() {
        return Err(Error::NoCouplings);
    }
    let (h, labels) = c.to_hamiltonian();
    let model = Qaoa1Model::new(&h);
    let params = model.optimize();
    let energy = model.energy(params);
    let m = model.coupling_correlations(params);
    let mut best = 0;
    for (i, corr) in m.iter().enumerate() {
        if corr.abs() > m[best].abs() {
            best = i;
        }
    }
    let (a, b, _) = h.couplings_half_units()[best];
    let (u, v) = (labels[a], labels[b]);
    let degenerate = m[best].abs() < DEGENERATE;
    let sign = if degenerate || m[best] > 0.0 { 1 } else { -1 };
    let mut next = c.clone();
    next.contract(u, v, sign)?;
    Ok((next, StepRecord { u, v, sign, correlation: m[best].abs(), degenerate, params, energy }))
}

/// Minimum-energy assignment of the active spins by exhaustive search
/// (Gray-code order, ties to the first found, which starts from all `+1`).
fn brute_force_tail(c: &ContractedIsing) -> Result<Vec<i8>> {
    let labels: Vec<usize> = c.active().collect();
    if labels.len() > MAX_CUTOFF {
        return Err(Error::TooLarge { what: "brute-force tail", max: MAX_CUTOFF, got: labels.len() });
    }
    let mut z = vec![1i8; c.n()];
    let mut nbrs: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for (u, v, k) in c.couplings_half_units() {
        nbrs.entry(u).or_default().push((v, k));
        nbrs.entry(v).or_default().push((u, k));
    }
    let mut e = c.energy_half_units(&z)?;
    let (mut best, mut best_z) = (e, z.clone());
    for step in 1u64..1 << labels.len() {
        let q = labels[step.trailing_zeros() as usize];
        let delta: i64 = nbrs.get(&q).map_or(0, |l| l.iter().map(|&(w, k)| -2 * k * (z[q] * z[w]) as i64).sum());
        z[q] = -z[q];
        e += delta;
        if e < best {
            best = e;
            best_z.clone_from(&z);
        }
    }
    Ok(best_z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RqaoaRun {
    pub spins: SpinAssignment,
    pub energy: f64,
    pub steps: Vec<StepRecord>,
}

/// Full recursion on an arbitrary Hamiltonian.
pub fn rqaoa_solve_ising(h: &IsingHamiltonian, cutoff: usize) -> Result<RqaoaRun> {
    if cutoff == 0 || cutoff > MAX_CUTOFF {
        return Err(Error::Config(format!("cutoff must be in 1..={MAX_CUTOFF}, got {cutoff}")));
    }
    let mut c = ContractedIsing::new(h);
    let mut steps = Vec::new();
    while c.active_count() > cutoff && !c.couplings2.is_empty() {
        let (next, rec) = rqaoa_step(&c)?;
        log::debug!("step {} {rec}", steps.len() + 1);
        steps.push(rec);
        c = next;
    }
    // Without couplings every assignment of the remaining spins ties; the
    // tail search then keeps all +1, so it only runs when it can matter.
    let mut z = if c.couplings2.is_empty() { vec![1; c.n()] } else { brute_force_tail(&c)? };
    c.replay(&mut z)?;
    let spins = SpinAssignment::new(z)?;
    let energy = h.energy(&spins)?;
    Ok(RqaoaRun { spins, energy, steps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RqaoaSolution {
    pub cost: usize,
    pub coloring: FullColoring,
    pub steps: Vec<StepRecord>,
}

pub fn rqaoa_solve(x: &BpspInstance, cutoff: usize) -> Result<RqaoaSolution> {
    let run = rqaoa_solve_ising(&build_ising(x), cutoff)?;
    let cost = icc_swap_count_spin(x, &run.spins)?;
    let coloring = expand(x, &IccColoring::from(&run.spins))?;
    Ok(RqaoaSolution { cost, coloring, steps: run.steps })
}

/// Step trace, one `step u v sign |M|` line per contraction (1-based labels).
pub fn format_trace(steps: &[StepRecord]) -> String {
    steps.iter().enumerate().map(|(i, s)| format!("{} {s}\n", i + 1)).collect()
}

/// RQAOA as a MaxCut heuristic.
#[derive(Debug, Clone, Copy)]
pub struct RqaoaMaxCut {
    pub cutoff: usize,
}

impl MaxCutBackend for RqaoaMaxCut {
    fn name(&self) -> &str {
        "rqaoa"
    }

    fn solve(&self, g: &BpspGraph) -> Result<MaxCutSolution> {
        let run = rqaoa_solve_ising(&IsingHamiltonian::from_maxcut(g), self.cutoff)?;
        let cut = IccColoring::from(&run.spins);
        Ok(MaxCutSolution { value: g.cut_weight(&cut)?, cut })
    }
}
