use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::encoding::{expand, icc_swap_count_spin, FullColoring, IccColoring, SpinAssignment};
use crate::error::{Error, Result};
use crate::instances::BpspInstance;
use crate::oracles::{CircuitSpec, PhaseTerm};
use crate::qaoa::lbfgs::{minimize, LbfgsOptions};
use crate::qaoa::lightcone::{lightcone_pair_expectation, lightcone_single_expectation};
use crate::qaoa::{adjacency, pair_stencil, products_excluding_one, Adjacency, Arm, PairStencil};
use crate::reduction::{build_ising, BpspGraph, IsingHamiltonian, MaxCutBackend, MaxCutSolution};
use crate::seed::Seed;

/// Which single-qubit rotations the mixer layer uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MixerKind {
    /// One shared angle per qubit for both the X and the Y rotation.
    #[default]
    XEqY,
    /// X rotations only (multi-angle QAOA).
    X,
    /// Y rotations only.
    Y,
    /// Independent X and Y angles per qubit.
    Xy,
}

impl MixerKind {
    pub fn name(self) -> &'static str {
        match self {
            MixerKind::XEqY => "x=y",
            MixerKind::X => "x",
            MixerKind::Y => "y",
            MixerKind::Xy => "xy",
        }
    }

    fn mixer_params_per_vertex(self) -> usize {
        if self == MixerKind::Xy {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for MixerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MixerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x=y" | "xeqy" => Ok(MixerKind::XEqY),
            "x" => Ok(MixerKind::X),
            "y" => Ok(MixerKind::Y),
            "xy" => Ok(MixerKind::Xy),
            _ => Err(Error::Config(format!("unknown mixer kind `{s}`"))),
        }
    }
}

/// One phase angle per coupling (canonical coupling order) and the mixer
/// angles of every vertex. `alpha` drives Y rotations, `beta` X rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct XqaoaParams {
    kind: MixerKind,
    gamma: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl XqaoaParams {
    /// Number of free parameters for `m` couplings and `n` vertices.
    pub fn free_count(kind: MixerKind, m: usize, n: usize) -> usize {
        m + kind.mixer_params_per_vertex() * n
    }

    /// Unpacks `[γ_1..γ_m, mixer angles]`; for `Xy` the mixer block is all
    /// `α` followed by all `β`.
    pub fn from_vector(kind: MixerKind, m: usize, n: usize, v: &[f64]) -> Result<Self> {
        let expected = Self::free_count(kind, m, n);
        if v.len() != expected {
            return Err(Error::ParameterCount { expected, got: v.len() });
        }
        let gamma = v[..m].to_vec();
        let mix = &v[m..];
        let zeros = vec![0.0; n];
        let (alpha, beta) = match kind {
            MixerKind::XEqY => (mix.to_vec(), mix.to_vec()),
            MixerKind::X => (zeros, mix.to_vec()),
            MixerKind::Y => (mix.to_vec(), zeros),
            MixerKind::Xy => (mix[..n].to_vec(), mix[n..].to_vec()),
        };
        Ok(XqaoaParams { kind, gamma, alpha, beta })
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = self.gamma.clone();
        match self.kind {
            MixerKind::XEqY | MixerKind::X => v.extend(&self.beta),
            MixerKind::Y => v.extend(&self.alpha),
            MixerKind::Xy => {
                v.extend(&self.alpha);
                v.extend(&self.beta);
            }
        }
        v
    }

    /// Every phase angle `γ`, every X angle `β`, no Y rotations: plain QAOA_1.
    pub fn plain(m: usize, n: usize, beta: f64, gamma: f64) -> Self {
        XqaoaParams { kind: MixerKind::X, gamma: vec![gamma; m], alpha: vec![0.0; n], beta: vec![beta; n] }
    }

    pub fn kind(&self) -> MixerKind {
        self.kind
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub(crate) fn check(&self, h: &IsingHamiltonian) -> Result<()> {
        if self.gamma.len() != h.num_couplings() {
            return Err(Error::ParameterCount { expected: h.num_couplings(), got: self.gamma.len() });
        }
        if self.alpha.len() != h.n() {
            return Err(Error::ParameterCount { expected: h.n(), got: self.alpha.len() });
        }
        Ok(())
    }

    /// The full circuit on `h`, for the statevector oracle.
    pub fn circuit(&self, h: &IsingHamiltonian) -> Result<CircuitSpec> {
        self.check(h)?;
        Ok(CircuitSpec {
            n: h.n(),
            offset: h.offset(),
            terms: h
                .couplings()
                .zip(&self.gamma)
                .map(|((u, v, j), &gamma)| PhaseTerm { u, v, coupling: j, gamma })
                .collect(),
            beta: self.beta.clone(),
            alpha: self.alpha.clone(),
        })
    }
}

/// Heisenberg-picture Bloch vector of `Z` after the mixer, with its
/// derivatives in `α` and `β`.
#[derive(Debug, Clone, Copy, Default)]
struct Bloch {
    n: [f64; 3],
    d_alpha: [f64; 3],
    d_beta: [f64; 3],
}

impl Bloch {
    fn new(alpha: f64, beta: f64) -> Self {
        let (sa, ca) = (2.0 * alpha).sin_cos();
        let (sb, cb) = (2.0 * beta).sin_cos();
        Bloch {
            n: [-sa, ca * sb, ca * cb],
            d_alpha: [-2.0 * ca, -2.0 * sa * sb, -2.0 * sa * cb],
            d_beta: [0.0, 2.0 * ca * cb, -2.0 * ca * sb],
        }
    }
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Scratch buffers for the per-pair gradient.
#[derive(Default)]
struct Scratch {
    f: Vec<f64>,
    excl: Vec<f64>,
}

/// Precomputed neighbourhoods of a Hamiltonian for closed-form XQAOA_1
/// expectations and gradients.
#[derive(Debug, Clone)]
pub struct XqaoaModel {
    n: usize,
    offset: f64,
    /// `(u, v, 2J, stencil)` per coupling.
    edges: Vec<(usize, usize, i64, PairStencil)>,
    adj: Adjacency,
}

struct Angles {
    cos: Vec<f64>,
    sin: Vec<f64>,
    bloch: Vec<Bloch>,
}

impl XqaoaModel {
    pub fn new(h: &IsingHamiltonian) -> Self {
        let adj = adjacency(h.n(), h.couplings_half_units());
        let edges = h
            .couplings_half_units()
            .iter()
            .map(|&(u, v, k)| (u, v, k, pair_stencil(&adj, u, v).expect("coupling endpoints are valid")))
            .collect();
        XqaoaModel { n: h.n(), offset: h.offset(), edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_couplings(&self) -> usize {
        self.edges.len()
    }

    fn check(&self, p: &XqaoaParams) -> Result<()> {
        if p.gamma.len() != self.edges.len() {
            return Err(Error::ParameterCount { expected: self.edges.len(), got: p.gamma.len() });
        }
        if p.alpha.len() != self.n || p.beta.len() != self.n {
            return Err(Error::ParameterCount { expected: self.n, got: p.alpha.len().min(p.beta.len()) });
        }
        Ok(())
    }

    fn angles(&self, p: &XqaoaParams) -> Angles {
        // 2γJ for each coupling, i.e. γ times the half-unit coupling.
        let (sin, cos) = self.edges.iter().zip(&p.gamma).map(|((_, _, k, _), &g)| (g * *k as f64).sin_cos()).unzip();
        let bloch = p.alpha.iter().zip(&p.beta).map(|(&a, &b)| Bloch::new(a, b)).collect();
        Angles { cos, sin, bloch }
    }

    /// `⟨Z_u Z_v⟩` from the two-qubit reduced state. When `grad` is given,
    /// adds `weight` times the derivatives into it (full layout: `γ`, `α`, `β`).
    fn pair_kernel(
        &self,
        ang: &Angles,
        u: usize,
        v: usize,
        s: &PairStencil,
        grad: Option<(&mut [f64], f64, &mut Scratch)>,
    ) -> f64 {
        let (cg, sg) = (&ang.cos, &ang.sin);
        let (bu, bv) = (&ang.bloch[u], &ang.bloch[v]);
        let (nu, nv) = (&bu.n, &bv.n);
        let prod = |arms: &[Arm]| arms.iter().fold(1.0, |acc, a| acc * cg[a.edge]);
        let (pu_only, pv_only) = (prod(&s.u_only), prod(&s.v_only));
        let (mut cu, mut cv, mut cp, mut cm) = (1.0, 1.0, 1.0, 1.0);
        for (a, b) in &s.common {
            let (ca, sa, cb, sb) = (cg[a.edge], sg[a.edge], cg[b.edge], sg[b.edge]);
            cu *= ca;
            cv *= cb;
            cp *= ca * cb - sa * sb;
            cm *= ca * cb + sa * sb;
        }
        let (s2c, c2c) = s.direct.map_or((0.0, 1.0), |a| (sg[a.edge], cg[a.edge]));
        let pu = pu_only * cu;
        let pv = pv_only * cv;
        let uv = pu_only * pv_only;
        let (pp, pm) = (uv * cp, uv * cm);
        let txx = 0.5 * (pp + pm);
        let tyy = 0.5 * (pm - pp);
        let tyz = s2c * pu;
        let tzy = s2c * pv;
        let value = nu[0] * nv[0] * txx + nu[1] * nv[1] * tyy + nu[1] * nv[2] * tyz + nu[2] * nv[1] * tzy;

        let Some((grad, w, scratch)) = grad else {
            return value;
        };
        let m = self.edges.len();
        let (g_gamma, rest) = grad.split_at_mut(m);
        let (g_alpha, g_beta) = rest.split_at_mut(self.n);

        let gnu = [nv[0] * txx, nv[1] * tyy + nv[2] * tyz, nv[1] * tzy];
        let gnv = [nu[0] * txx, nu[1] * tyy + nu[2] * tzy, nu[1] * tyz];
        g_alpha[u] += w * dot3(&gnu, &bu.d_alpha);
        g_beta[u] += w * dot3(&gnu, &bu.d_beta);
        g_alpha[v] += w * dot3(&gnv, &bv.d_alpha);
        g_beta[v] += w * dot3(&gnv, &bv.d_beta);

        let g_pu = nu[1] * nv[2] * s2c;
        let g_pv = nu[2] * nv[1] * s2c;
        let g_pp = 0.5 * (nu[0] * nv[0] - nu[1] * nv[1]);
        let g_pm = 0.5 * (nu[0] * nv[0] + nu[1] * nv[1]);
        if let Some(a) = s.direct {
            // d sin(γk)/dγ = k cos(γk).
            g_gamma[a.edge] += w * a.k as f64 * c2c * (nu[1] * nv[2] * pu + nu[2] * nv[1] * pv);
        }
        let mixed = g_pp * cp + g_pm * cm;
        let g_uonly = g_pu * cu + mixed * pv_only;
        let g_vonly = g_pv * cv + mixed * pu_only;
        let g_cu = g_pu * pu_only;
        let g_cv = g_pv * pv_only;
        let g_cp = g_pp * uv;
        let g_cm = g_pm * uv;

        let Scratch { f, excl } = scratch;
        for (arms, g) in [(&s.u_only, g_uonly), (&s.v_only, g_vonly)] {
            f.clear();
            f.extend(arms.iter().map(|a| cg[a.edge]));
            products_excluding_one(f, excl);
            for (a, e) in arms.iter().zip(excl.iter()) {
                g_gamma[a.edge] -= w * g * e * a.k as f64 * sg[a.edge];
            }
        }
        if s.common.is_empty() {
            return value;
        }
        for side in 0..2 {
            let g = if side == 0 { g_cu } else { g_cv };
            f.clear();
            f.extend(s.common.iter().map(|(a, b)| cg[if side == 0 { a.edge } else { b.edge }]));
            products_excluding_one(f, excl);
            for ((a, b), e) in s.common.iter().zip(excl.iter()) {
                let arm = if side == 0 { a } else { b };
                g_gamma[arm.edge] -= w * g * e * arm.k as f64 * sg[arm.edge];
            }
        }
        for sign in [1.0, -1.0] {
            let g = if sign > 0.0 { g_cp } else { g_cm };
            f.clear();
            f.extend(s.common.iter().map(|(a, b)| cg[a.edge] * cg[b.edge] - sign * sg[a.edge] * sg[b.edge]));
            products_excluding_one(f, excl);
            for ((a, b), e) in s.common.iter().zip(excl.iter()) {
                // sin(A ± B)
                let sin_ab = sg[a.edge] * cg[b.edge] + sign * cg[a.edge] * sg[b.edge];
                g_gamma[a.edge] -= w * g * e * a.k as f64 * sin_ab;
                g_gamma[b.edge] -= w * g * e * sign * b.k as f64 * sin_ab;
            }
        }
        value
    }

    pub fn energy(&self, p: &XqaoaParams) -> Result<f64> {
        self.check(p)?;
        let ang = self.angles(p);
        let sum: f64 = self
            .edges
            .iter()
            .map(|(u, v, k, s)| *k as f64 / 2.0 * self.pair_kernel(&ang, *u, *v, s, None))
            .sum();
        Ok(self.offset + sum)
    }

    /// Energy and its gradient with respect to `(γ, α, β)` separately.
    pub fn energy_and_full_gradient(&self, p: &XqaoaParams) -> Result<(f64, Vec<f64>)> {
        self.check(p)?;
        let ang = self.angles(p);
        let mut grad = vec![0.0; self.edges.len() + 2 * self.n];
        let mut scratch = Scratch::default();
        let mut energy = self.offset;
        for (u, v, k, s) in &self.edges {
            let j = *k as f64 / 2.0;
            energy += j * self.pair_kernel(&ang, *u, *v, s, Some((&mut grad, j, &mut scratch)));
        }
        Ok((energy, grad))
    }

    /// Energy and gradient over the free parameters of `p`'s mixer kind, in
    /// [`XqaoaParams::to_vector`] layout.
    pub fn energy_and_gradient(&self, p: &XqaoaParams) -> Result<(f64, Vec<f64>)> {
        let (e, full) = self.energy_and_full_gradient(p)?;
        let m = self.edges.len();
        let (g_gamma, rest) = full.split_at(m);
        let (g_alpha, g_beta) = rest.split_at(self.n);
        let mut g = g_gamma.to_vec();
        match p.kind {
            MixerKind::XEqY => g.extend(g_alpha.iter().zip(g_beta).map(|(a, b)| a + b)),
            MixerKind::X => g.extend(g_beta),
            MixerKind::Y => g.extend(g_alpha),
            MixerKind::Xy => {
                g.extend(g_alpha);
                g.extend(g_beta);
            }
        }
        Ok((e, g))
    }

    /// Closed-form `⟨Z_u Z_v⟩` for any two distinct spins.
    pub fn pair_expectation(&self, p: &XqaoaParams, u: usize, v: usize) -> Result<f64> {
        self.check(p)?;
        let s = pair_stencil(&self.adj, u, v)?;
        Ok(self.pair_kernel(&self.angles(p), u, v, &s, None))
    }

    /// Closed-form `⟨Z_j⟩` for every spin.
    pub fn single_expectations(&self, p: &XqaoaParams) -> Result<Vec<f64>> {
        self.check(p)?;
        let ang = self.angles(p);
        Ok((0..self.n)
            .map(|j| ang.bloch[j].n[0] * self.adj[j].iter().map(|&(_, _, e)| ang.cos[e]).product::<f64>())
            .collect())
    }
}

/// Exact energy, each two-point function from a dense simulation of its
/// lightcone.
pub fn xqaoa_energy(h: &IsingHamiltonian, p: &XqaoaParams) -> Result<f64> {
    p.check(h)?;
    let mut e = h.offset();
    for (u, v, j) in h.couplings() {
        e += j * lightcone_pair_expectation(h, p, u, v)?;
    }
    Ok(e)
}

/// Analytic gradient in [`XqaoaParams::to_vector`] layout.
pub fn xqaoa_gradient(h: &IsingHamiltonian, p: &XqaoaParams) -> Result<Vec<f64>> {
    Ok(XqaoaModel::new(h).energy_and_gradient(p)?.1)
}

/// Rounds `⟨Z_j⟩` to a spin; near-zero expectations go to `+1`.
pub fn extract_cut(h: &IsingHamiltonian, p: &XqaoaParams) -> Result<SpinAssignment> {
    p.check(h)?;
    let spins = (0..h.n())
        .map(|j| lightcone_single_expectation(h, p, j).map(round_spin))
        .collect::<Result<Vec<i8>>>()?;
    SpinAssignment::new(spins)
}

fn round_spin(z: f64) -> i8 {
    if z <= -1e-9 {
        -1
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XqaoaOptions {
    pub restarts: usize,
    pub kind: MixerKind,
    pub lbfgs: LbfgsOptions,
}

impl Default for XqaoaOptions {
    fn default() -> Self {
        XqaoaOptions { restarts: 10, kind: MixerKind::XEqY, lbfgs: LbfgsOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub restart: usize,
    pub params: XqaoaParams,
    pub energy: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Rounded assignment and its exact energy.
    pub spins: SpinAssignment,
    pub rounded_energy: f64,
}

fn run_restart(model: &XqaoaModel, h: &IsingHamiltonian, opts: &XqaoaOptions, seed: Seed, r: usize) -> RestartOutcome {
    let (m, n) = (model.num_couplings(), model.n());
    let mut rng = seed.derive(r as u64).rng();
    let mut x0: Vec<f64> = (0..m).map(|_| rng.gen_range(-PI..PI)).collect();
    x0.extend((0..XqaoaParams::free_count(opts.kind, m, n) - m).map(|_| rng.gen_range(0.0..PI)));
    let objective = |x: &[f64], g: &mut [f64]| {
        let p = XqaoaParams::from_vector(opts.kind, m, n, x).expect("optimizer keeps the dimension");
        let (e, grad) = model.energy_and_gradient(&p).expect("parameter counts match the model");
        g.copy_from_slice(&grad);
        e
    };
    let res = minimize(objective, x0, &opts.lbfgs);
    let params = XqaoaParams::from_vector(opts.kind, m, n, &res.x).expect("optimizer keeps the dimension");
    let z = model.single_expectations(&params).expect("parameter counts match the model");
    let spins = SpinAssignment::new(z.into_iter().map(round_spin).collect()).expect("rounded spins are ±1");
    let rounded_energy = h.energy(&spins).expect("assignment length matches");
    RestartOutcome {
        restart: r,
        params,
        energy: res.value,
        iterations: res.iterations,
        converged: res.converged,
        spins,
        rounded_energy,
    }
}

/// Every restart's outcome, in restart order. Restart `r` starts from a
/// point drawn with `seed.derive(r)`, so results do not depend on the
/// number of worker threads or on the total restart count.
pub fn xqaoa_optimize_all(h: &IsingHamiltonian, opts: &XqaoaOptions, seed: Seed) -> Result<Vec<RestartOutcome>> {
    if opts.restarts == 0 {
        return Err(Error::Config("restarts must be at least 1".into()));
    }
    let model = XqaoaModel::new(h);
    Ok((0..opts.restarts).into_par_iter().map(|r| run_restart(&model, h, opts, seed, r)).collect())
}

/// Best restart by optimised energy (earliest restart on ties).
pub fn xqaoa_optimize(h: &IsingHamiltonian, opts: &XqaoaOptions, seed: Seed) -> Result<(XqaoaParams, f64)> {
    let all = xqaoa_optimize_all(h, opts, seed)?;
    let best = all.into_iter().reduce(|a, b| if b.energy < a.energy { b } else { a }).expect("at least one restart");
    Ok((best.params, best.energy))
}

#[derive(Debug, Clone, PartialEq)]
pub struct XqaoaSolution {
    pub cost: usize,
    pub coloring: FullColoring,
    pub spins: SpinAssignment,
    pub restarts: Vec<RestartOutcome>,
}

/// Optimises every restart, rounds each one and keeps the cheapest rounded
/// colouring (ties: lower optimised energy, then earlier restart).
pub fn xqaoa_solve(x: &BpspInstance, opts: &XqaoaOptions, seed: Seed) -> Result<XqaoaSolution> {
    let h = build_ising(x);
    let restarts = xqaoa_optimize_all(&h, opts, seed)?;
    let best = restarts
        .iter()
        .reduce(|a, b| {
            if (b.rounded_energy, b.energy) < (a.rounded_energy, a.energy) {
                b
            } else {
                a
            }
        })
        .expect("at least one restart");
    let spins = best.spins.clone();
    let cost = icc_swap_count_spin(x, &spins)?;
    let coloring = expand(x, &(&spins).into())?;
    Ok(XqaoaSolution { cost, coloring, spins, restarts })
}

/// XQAOA_1 as a MaxCut heuristic: the cheapest rounded restart.
#[derive(Debug, Clone)]
pub struct XqaoaMaxCut {
    pub options: XqaoaOptions,
    pub seed: Seed,
}

impl MaxCutBackend for XqaoaMaxCut {
    fn name(&self) -> &str {
        "xqaoa"
    }

    fn solve(&self, g: &BpspGraph) -> Result<MaxCutSolution> {
        let h = IsingHamiltonian::from_maxcut(g);
        let restarts = xqaoa_optimize_all(&h, &self.options, self.seed)?;
        let best = restarts
            .iter()
            .reduce(|a, b| if b.rounded_energy < a.rounded_energy { b } else { a })
            .expect("at least one restart");
        let cut = IccColoring::from(&best.spins);
        Ok(MaxCutSolution { value: g.cut_weight(&cut)?, cut })
    }
}
