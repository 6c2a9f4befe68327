use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use rayon::prelude::*;

use crate::error::Result;
use crate::qaoa::{adjacency, pair_stencil, PairStencil};
use crate::reduction::IsingHamiltonian;

const GRID_POINTS: usize = 1024;
const GOLDEN_WIDTH: f64 = 1e-10;

/// Plain depth-1 angles: `β ∈ [0, π)`, `γ ∈ [−π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Qaoa1Params {
    pub beta: f64,
    pub gamma: f64,
}

impl Qaoa1Params {
    pub fn new(beta: f64, gamma: f64) -> Self {
        Qaoa1Params { beta: beta.rem_euclid(PI), gamma: (gamma + PI).rem_euclid(2.0 * PI) - PI }
    }
}

/// Value with its derivative in `γ`.
#[derive(Debug, Clone, Copy)]
struct Dual(f64, f64);

trait Lane: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> {
    const ONE: Self;
    const ZERO: Self;
}

impl Lane for f64 {
    const ONE: f64 = 1.0;
    const ZERO: f64 = 0.0;
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual(self.0 - o.0, self.1 - o.1)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual(self.0 * o.0, self.1 * o.0 + self.0 * o.1)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, s: f64) -> Dual {
        Dual(self.0 * s, self.1 * s)
    }
}

impl Lane for Dual {
    const ONE: Dual = Dual(1.0, 0.0);
    const ZERO: Dual = Dual(0.0, 0.0);
}

/// `cos(kγ)` and `sin(kγ)` for `k ∈ 0..=kmax`, by angle addition.
struct TrigTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TrigTable {
    fn new(gamma: f64, kmax: usize) -> Self {
        let (s1, c1) = gamma.sin_cos();
        let mut cos = Vec::with_capacity(kmax + 1);
        let mut sin = Vec::with_capacity(kmax + 1);
        cos.push(1.0);
        sin.push(0.0);
        for k in 1..=kmax {
            // Re-anchor periodically so rounding does not accumulate.
            if k % 32 == 0 {
                let (s, c) = (k as f64 * gamma).sin_cos();
                cos.push(c);
                sin.push(s);
            } else {
                let (c, s) = (cos[k - 1], sin[k - 1]);
                cos.push(c * c1 - s * s1);
                sin.push(s * c1 + c * s1);
            }
        }
        TrigTable { cos, sin }
    }
}

trait Lookup<L> {
    fn cos(&self, k: i64) -> L;
    fn sin(&self, k: i64) -> L;
}

impl Lookup<f64> for TrigTable {
    fn cos(&self, k: i64) -> f64 {
        self.cos[k.unsigned_abs() as usize]
    }
    fn sin(&self, k: i64) -> f64 {
        k.signum() as f64 * self.sin[k.unsigned_abs() as usize]
    }
}

struct DualTable<'a>(&'a TrigTable);

impl Lookup<Dual> for DualTable<'_> {
    fn cos(&self, k: i64) -> Dual {
        let s: f64 = self.0.sin(k);
        Dual(self.0.cos[k.unsigned_abs() as usize], -(k as f64) * s)
    }
    fn sin(&self, k: i64) -> Dual {
        let c = self.0.cos[k.unsigned_abs() as usize];
        Dual(self.0.sin(k), k as f64 * c)
    }
}

/// The four neighbourhood products of a pair: `Π_u`, `Π_v` (all neighbours
/// but the partner) and `P_±` (common neighbours enter as `cos(2γ(J_uw ± J_vw))`).
fn products<L: Lane>(s: &PairStencil, t: &impl Lookup<L>) -> (L, L, L, L) {
    let (mut cu, mut cv) = (L::ONE, L::ONE);
    for a in &s.u_only {
        cu = cu * t.cos(a.k);
    }
    for a in &s.v_only {
        cv = cv * t.cos(a.k);
    }
    let (mut cuc, mut cvc, mut cp, mut cm) = (L::ONE, L::ONE, L::ONE, L::ONE);
    for (a, b) in &s.common {
        cuc = cuc * t.cos(a.k);
        cvc = cvc * t.cos(b.k);
        cp = cp * t.cos(a.k + b.k);
        cm = cm * t.cos(a.k - b.k);
    }
    let uv = cu * cv;
    (cu * cuc, cv * cvc, uv * cp, uv * cm)
}

/// Precomputed neighbourhood structure of a Hamiltonian for fast QAOA_1
/// evaluation. The energy is `offset + a(γ) sin 4β + b(γ) sin² 2β`.
#[derive(Debug, Clone)]
pub struct Qaoa1Model {
    offset: f64,
    /// `(2J_e, stencil of e)` for every coupling.
    edges: Vec<(i64, PairStencil)>,
    kmax: usize,
}

impl Qaoa1Model {
    pub fn new(h: &IsingHamiltonian) -> Self {
        let couplings = h.couplings_half_units();
        let adj = adjacency(h.n(), couplings);
        let edges: Vec<(i64, PairStencil)> = couplings
            .iter()
            .map(|&(u, v, k)| (k, pair_stencil(&adj, u, v).expect("coupling endpoints are valid")))
            .collect();
        let kmax = edges
            .iter()
            .flat_map(|(k, s)| {
                let pairs = s.common.iter().map(|(a, b)| a.k.abs() + b.k.abs());
                std::iter::once(k.abs()).chain(pairs)
            })
            .chain(adj.iter().flatten().map(|&(_, k, _)| k.abs()))
            .max()
            .unwrap_or(0) as usize;
        Qaoa1Model { offset: h.offset(), edges, kmax }
    }

    fn ab_generic<L: Lane>(&self, t: &impl Lookup<L>) -> (L, L) {
        let (mut a, mut b) = (L::ZERO, L::ZERO);
        for (k, s) in &self.edges {
            let j = *k as f64 / 2.0;
            let (pu, pv, pp, pm) = products(s, t);
            a = a + t.sin(*k) * (pu + pv) * (0.5 * j);
            b = b - (pp - pm) * (0.5 * j);
        }
        (a, b)
    }

    /// `(a(γ), b(γ))`.
    pub fn ab(&self, gamma: f64) -> (f64, f64) {
        self.ab_generic(&TrigTable::new(gamma, self.kmax))
    }

    /// `(a, b, da/dγ, db/dγ)`.
    pub fn ab_with_derivative(&self, gamma: f64) -> (f64, f64, f64, f64) {
        let table = TrigTable::new(gamma, self.kmax);
        let (a, b) = self.ab_generic(&DualTable(&table));
        (a.0, b.0, a.1, b.1)
    }

    pub fn energy(&self, p: Qaoa1Params) -> f64 {
        let (a, b) = self.ab(p.gamma);
        let s2 = (2.0 * p.beta).sin();
        self.offset + a * (4.0 * p.beta).sin() + b * s2 * s2
    }

    /// `(∂E/∂β, ∂E/∂γ)`.
    pub fn gradient(&self, p: Qaoa1Params) -> (f64, f64) {
        let (a, b, da, db) = self.ab_with_derivative(p.gamma);
        let (s4, c4) = (4.0 * p.beta).sin_cos();
        let s2 = (2.0 * p.beta).sin();
        (4.0 * a * c4 + 2.0 * b * s4, da * s4 + db * s2 * s2)
    }

    /// `⟨Z_u Z_v⟩` for every coupling, in the Hamiltonian's canonical order.
    pub fn coupling_correlations(&self, p: Qaoa1Params) -> Vec<f64> {
        let t = TrigTable::new(p.gamma, self.kmax);
        let s4 = (4.0 * p.beta).sin();
        let s2 = (2.0 * p.beta).sin();
        self.edges
            .iter()
            .map(|(k, s)| {
                let (pu, pv, pp, pm) = products(s, &t);
                0.5 * s4 * t.sin(*k) * (pu + pv) - 0.5 * s2 * s2 * (pp - pm)
            })
            .collect()
    }

    /// Minimum over `β` of the energy at fixed `γ`, with the minimising `t = 4β`.
    fn best_over_beta(&self, a: f64, b: f64) -> (f64, f64) {
        let r = a.hypot(0.5 * b);
        let t = if r == 0.0 { 0.0 } else { (-a).atan2(0.5 * b) };
        (self.offset + 0.5 * b - r, t)
    }

    fn reduced_energy(&self, gamma: f64) -> f64 {
        let (a, b) = self.ab(gamma);
        self.best_over_beta(a, b).0
    }

    fn reduced_derivative(&self, gamma: f64) -> f64 {
        let (a, b, da, db) = self.ab_with_derivative(gamma);
        let (_, t) = self.best_over_beta(a, b);
        da * t.sin() + 0.5 * db * (1.0 - t.cos())
    }

    /// Grid sweep over `γ`, golden-section refinement around the best grid
    /// point, then a Newton polish on `dE*/dγ`.
    pub fn optimize(&self) -> Qaoa1Params {
        if self.edges.is_empty() {
            return Qaoa1Params::new(0.0, 0.0);
        }
        let h = 2.0 * PI / GRID_POINTS as f64;
        let grid: Vec<f64> = (0..GRID_POINTS)
            .into_par_iter()
            .map(|i| self.reduced_energy(-PI + h * i as f64))
            .collect();
        let best = (0..GRID_POINTS).fold(0, |b, i| if grid[i] < grid[b] { i } else { b });
        let mut gamma = -PI + h * best as f64;
        let mut energy = grid[best];

        let (mut lo, mut hi) = (gamma - h, gamma + h);
        let ratio = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let (mut f1, mut f2) = (self.reduced_energy(x1), self.reduced_energy(x2));
        while hi - lo > GOLDEN_WIDTH {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = self.reduced_energy(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = self.reduced_energy(x2);
            }
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = self.reduced_energy(mid);
        if f_mid < energy {
            gamma = mid;
            energy = f_mid;
        }

        let mut d = self.reduced_derivative(gamma);
        for _ in 0..20 {
            if d.abs() < 1e-13 {
                break;
            }
            let eps = 1e-7;
            let curv = (self.reduced_derivative(gamma + eps) - self.reduced_derivative(gamma - eps)) / (2.0 * eps);
            if !(curv > 0.0) {
                break;
            }
            let step = -d / curv;
            if step.abs() > 1e-4 {
                break;
            }
            let (g_new, d_new) = (gamma + step, self.reduced_derivative(gamma + step));
            let e_new = self.reduced_energy(g_new);
            if d_new.abs() >= d.abs() || e_new > energy + 1e-12 * energy.abs().max(1.0) {
                break;
            }
            gamma = g_new;
            energy = e_new.min(energy);
            d = d_new;
        }

        let (a, b) = self.ab(gamma);
        let (_, t) = self.best_over_beta(a, b);
        Qaoa1Params::new(t / 4.0, gamma)
    }
}

/// Exact `⟨Z_u Z_v⟩` of the QAOA_1 state, for any pair of distinct spins.
pub fn qaoa1_pair_expectation(h: &IsingHamiltonian, p: Qaoa1Params, u: usize, v: usize) -> Result<f64> {
    let adj = adjacency(h.n(), h.couplings_half_units());
    let s = pair_stencil(&adj, u, v)?;
    let kmax = adj.iter().flatten().map(|&(_, k, _)| 2 * k.unsigned_abs() as usize).max().unwrap_or(0);
    let t = TrigTable::new(p.gamma, kmax);
    let (pu, pv, pp, pm) = products(&s, &t);
    let direct = s.direct.map_or(0.0, |a| t.sin(a.k));
    let s2 = (2.0 * p.beta).sin();
    Ok(0.5 * (4.0 * p.beta).sin() * direct * (pu + pv) - 0.5 * s2 * s2 * (pp - pm))
}

pub fn qaoa1_energy(h: &IsingHamiltonian, p: Qaoa1Params) -> f64 {
    Qaoa1Model::new(h).energy(p)
}

pub fn qaoa1_optimize(h: &IsingHamiltonian) -> Qaoa1Params {
    Qaoa1Model::new(h).optimize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::BpspInstance;
    use crate::oracles::{simulate_p1, CircuitSpec};
    use crate::reduction::build_ising;
    use crate::seed::Seed;
    use rand::Rng;

    fn random_hamiltonian(n: usize, seed: Seed) -> IsingHamiltonian {
        let mut rng = seed.rng();
        let mut terms = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.4) {
                    terms.push((u, v, rng.gen_range(-4i64..=4)));
                }
            }
        }
        IsingHamiltonian::from_half_units(n, rng.gen_range(0..20), terms).unwrap()
    }

    #[test]
    fn zero_beta_and_zero_angles() {
        let h = build_ising(&BpspInstance::new(vec![1, 2, 1, 3, 3, 2]).unwrap());
        for g in [-2.0, 0.3, 1.1] {
            assert_eq!(qaoa1_pair_expectation(&h, Qaoa1Params::new(0.0, g), 0, 2).unwrap(), 0.0);
        }
        assert_eq!(qaoa1_energy(&h, Qaoa1Params::new(0.0, 0.0)), 3.0);
        assert!(qaoa1_pair_expectation(&h, Qaoa1Params::new(0.1, 0.1), 0, 3).is_err());
    }

    #[test]
    fn single_edge_extremal_point() {
        let h = IsingHamiltonian::from_half_units(2, 1, [(0, 1, 2)]).unwrap();
        let zz = qaoa1_pair_expectation(&h, Qaoa1Params::new(PI / 8.0, PI / 4.0), 0, 1).unwrap();
        assert!((zz - 1.0).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_statevector() {
        let mut rng = Seed(5).rng();
        for i in 0..40u64 {
            let n = 2 + (i as usize % 8);
            let h = random_hamiltonian(n, Seed(100).derive(i));
            let p = Qaoa1Params::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let r = simulate_p1(&CircuitSpec::qaoa1(&h, p.beta, p.gamma), &pairs).unwrap();
            for (k, &(u, v)) in pairs.iter().enumerate() {
                let a = qaoa1_pair_expectation(&h, p, u, v).unwrap();
                assert!((a - r.zz[k]).abs() < 1e-9, "n={n} ({u},{v}): {a} vs {}", r.zz[k]);
            }
            assert!((qaoa1_energy(&h, p) - r.energy).abs() < 1e-9);
            assert!(r.z.iter().all(|z| z.abs() < 1e-12));
            let m = Qaoa1Model::new(&h).coupling_correlations(p);
            for (c, (u, v, _)) in m.iter().zip(h.couplings()) {
                let k = pairs.iter().position(|&q| q == (u, v)).unwrap();
                assert!((c - r.zz[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for i in 0..10u64 {
            let h = random_hamiltonian(7, Seed(300).derive(i));
            let model = Qaoa1Model::new(&h);
            let p = Qaoa1Params::new(0.37 + 0.1 * i as f64, -1.3 + 0.25 * i as f64);
            let (db, dg) = model.gradient(p);
            let eps = 1e-6;
            let fd_b = (model.energy(Qaoa1Params { beta: p.beta + eps, ..p })
                - model.energy(Qaoa1Params { beta: p.beta - eps, ..p }))
                / (2.0 * eps);
            let fd_g = (model.energy(Qaoa1Params { gamma: p.gamma + eps, ..p })
                - model.energy(Qaoa1Params { gamma: p.gamma - eps, ..p }))
                / (2.0 * eps);
            assert!((db - fd_b).abs() < 1e-6 * fd_b.abs().max(1.0));
            assert!((dg - fd_g).abs() < 1e-6 * fd_g.abs().max(1.0));
        }
    }

    #[test]
    fn optimize_single_edge_is_exact() {
        // Coupling 1 and offset 1/2 in half units: energies 0 and 1.
        let h = IsingHamiltonian::from_half_units(2, 1, [(0, 1, 1)]).unwrap();
        let p = qaoa1_optimize(&h);
        assert!(qaoa1_energy(&h, p).abs() < 1e-6, "{}", qaoa1_energy(&h, p));
    }

    #[test]
    fn optimize_reference_instance() {
        let h = build_ising(&BpspInstance::new(vec![1, 2, 1, 3, 3, 2]).unwrap());
        let model = Qaoa1Model::new(&h);
        let p = model.optimize();
        let e = model.energy(p);
        assert!((2.0..=3.0).contains(&e), "{e}");
        let mut rng = Seed(2).rng();
        for _ in 0..64 {
            let q = Qaoa1Params::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
            // Any state's energy is bounded below by the optimum 2.
            assert!(e <= model.energy(q) + 1e-12);
            assert!(model.energy(q) >= 2.0 - 1e-12);
        }
    }

    #[test]
    fn optimum_beats_grid_and_is_stationary() {
        for i in 0..20u64 {
            let x = BpspInstance::random(4 + i as usize, Seed(8).derive(i)).unwrap();
            let h = build_ising(&x);
            let model = Qaoa1Model::new(&h);
            let p = model.optimize();
            let e = model.energy(p);
            for g in 0..GRID_POINTS {
                let gamma = -PI + 2.0 * PI * g as f64 / GRID_POINTS as f64;
                let (a, b) = model.ab(gamma);
                assert!(e <= model.best_over_beta(a, b).0 + 1e-12);
            }
            let (db, dg) = model.gradient(p);
            assert!(db.hypot(dg) < 1e-8, "n={} grad ({db}, {dg})", x.n());
        }
    }

    #[test]
    fn relabeling_preserves_optimum() {
        let x = BpspInstance::random(12, Seed(4)).unwrap();
        let h = build_ising(&x);
        let perm: Vec<usize> = (0..12).map(|i| (i * 5 + 3) % 12).collect();
        let relabeled = IsingHamiltonian::from_half_units(
            12,
            h.offset_half_units(),
            h.couplings_half_units().iter().map(|&(u, v, k)| (perm[u], perm[v], k)),
        )
        .unwrap();
        let e1 = qaoa1_energy(&h, qaoa1_optimize(&h));
        let e2 = qaoa1_energy(&relabeled, qaoa1_optimize(&relabeled));
        assert!((e1 - e2).abs() < 1e-9);
    }
}
