use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};

use crate::error::{Error, Result};
use crate::reduction::IsingHamiltonian;
use crate::seed::Seed;

pub const MAX_QUBITS: usize = 20;

/// One `exp(−i γ J Z_u Z_v)` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTerm {
    pub u: usize,
    pub v: usize,
    pub coupling: f64,
    pub gamma: f64,
}

/// A depth-1 circuit: phase separation, then `exp(−iβ_j X_j)`, then
/// `exp(−iα_j Y_j)`, applied to `|+⟩^n`. The offset only enters the
/// reported energy.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub n: usize,
    pub offset: f64,
    pub terms: Vec<PhaseTerm>,
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl CircuitSpec {
    /// Plain QAOA_1 on `h`: one shared `γ` and `β`, no Y rotations.
    pub fn qaoa1(h: &IsingHamiltonian, beta: f64, gamma: f64) -> Self {
        CircuitSpec {
            n: h.n(),
            offset: h.offset(),
            terms: h.couplings().map(|(u, v, j)| PhaseTerm { u, v, coupling: j, gamma }).collect(),
            beta: vec![beta; h.n()],
            alpha: vec![0.0; h.n()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedCircuit(m));
        if self.beta.len() != self.n || self.alpha.len() != self.n {
            return bad(format!("{} qubits but {} beta / {} alpha angles", self.n, self.beta.len(), self.alpha.len()));
        }
        if !self.offset.is_finite() || self.beta.iter().chain(&self.alpha).any(|a| !a.is_finite()) {
            return bad("non-finite angle or offset".into());
        }
        for t in &self.terms {
            if t.u >= self.n || t.v >= self.n || t.u == t.v {
                return bad(format!("bad pair ({}, {})", t.u, t.v));
            }
            if !t.coupling.is_finite() || !t.gamma.is_finite() {
                return bad(format!("non-finite term on ({}, {})", t.u, t.v));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStateReport {
    /// `⟨Z_u Z_v⟩` for each requested pair, in request order.
    pub zz: Vec<f64>,
    /// `⟨Z_j⟩` for every qubit.
    pub z: Vec<f64>,
    /// `offset + Σ J ⟨Z_u Z_v⟩` over the circuit's terms.
    pub energy: f64,
    pub norm: f64,
}

#[inline]
fn spin(idx: usize, q: usize) -> f64 {
    if idx >> q & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn prepare(spec: &CircuitSpec) -> Result<Vec<Complex64>> {
    spec.validate()?;
    if spec.n > MAX_QUBITS {
        return Err(Error::TooLarge { what: "statevector qubit count", max: MAX_QUBITS, got: spec.n });
    }
    let dim = 1usize << spec.n;
    let amp0 = 1.0 / (dim as f64).sqrt();
    let mut psi: Vec<Complex64> = (0..dim)
        .map(|idx| {
            let phi: f64 = spec.terms.iter().map(|t| t.gamma * t.coupling * spin(idx, t.u) * spin(idx, t.v)).sum();
            Complex64::from_polar(amp0, -phi)
        })
        .collect();
    for q in 0..spec.n {
        let (c, s) = (spec.beta[q].cos(), spec.beta[q].sin());
        apply_1q(&mut psi, q, |a0, a1| (a0 * c - Complex64::i() * s * a1, a1 * c - Complex64::i() * s * a0));
    }
    for q in 0..spec.n {
        let (c, s) = (spec.alpha[q].cos(), spec.alpha[q].sin());
        apply_1q(&mut psi, q, |a0, a1| (a0 * c - a1 * s, a0 * s + a1 * c));
    }
    Ok(psi)
}

fn apply_1q(psi: &mut [Complex64], q: usize, gate: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
    let mask = 1usize << q;
    for i0 in 0..psi.len() {
        if i0 & mask == 0 {
            let (b0, b1) = gate(psi[i0], psi[i0 | mask]);
            psi[i0] = b0;
            psi[i0 | mask] = b1;
        }
    }
}

/// Exact dense simulation. `pairs` selects which `⟨Z_u Z_v⟩` to report.
pub fn simulate_p1(spec: &CircuitSpec, pairs: &[(usize, usize)]) -> Result<QuantumStateReport> {
    if let Some(&(u, v)) = pairs.iter().find(|&&(u, v)| u >= spec.n || v >= spec.n) {
        return Err(Error::VertexOutOfRange(u.max(v)));
    }
    let psi = prepare(spec)?;
    let mut zz = vec![0.0; pairs.len()];
    let mut z = vec![0.0; spec.n];
    let (mut energy, mut norm) = (0.0, 0.0);
    for (idx, a) in psi.iter().enumerate() {
        let p = a.norm_sqr();
        norm += p;
        for (q, zq) in z.iter_mut().enumerate() {
            *zq += p * spin(idx, q);
        }
        for (k, &(u, v)) in pairs.iter().enumerate() {
            zz[k] += p * spin(idx, u) * spin(idx, v);
        }
        let e: f64 = spec.terms.iter().map(|t| t.coupling * spin(idx, t.u) * spin(idx, t.v)).sum();
        energy += p * e;
    }
    Ok(QuantumStateReport { zz, z, energy: spec.offset + energy, norm })
}

/// Independent computational-basis samples. Bit `j` of a sample is set when
/// qubit `j` was measured in `|1⟩`, i.e. spin `−1`.
pub fn sample_bitstrings(spec: &CircuitSpec, count: usize, seed: Seed) -> Result<Vec<u64>> {
    let psi = prepare(spec)?;
    let dist = WeightedIndex::new(psi.iter().map(|a| a.norm_sqr()))
        .map_err(|e| Error::MalformedCircuit(format!("degenerate distribution: {e}")))?;
    let mut rng = seed.rng();
    Ok((0..count).map(|_| dist.sample(&mut rng) as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single_edge(j2: i64, offset2: i64) -> IsingHamiltonian {
        IsingHamiltonian::from_half_units(2, offset2, [(0, 1, j2)]).unwrap()
    }

    #[test]
    fn zero_angles_leave_plus_state() {
        let h = IsingHamiltonian::from_half_units(4, 6, [(0, 1, 1), (1, 2, -2), (0, 3, 1)]).unwrap();
        let r = simulate_p1(&CircuitSpec::qaoa1(&h, 0.0, 0.0), &[(0, 1), (2, 3)]).unwrap();
        assert!(r.z.iter().chain(&r.zz).all(|v| v.abs() < 1e-15));
        assert!((r.norm - 1.0).abs() < 1e-12);
        assert!((r.energy - 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_extremal_point() {
        // Frozen sign: J = 1 at β = π/8, γ = π/4 gives perfect correlation.
        let r = simulate_p1(&CircuitSpec::qaoa1(&single_edge(2, 0), PI / 8.0, PI / 4.0), &[(0, 1)]).unwrap();
        assert!((r.zz[0] - 1.0).abs() < 1e-12, "{}", r.zz[0]);
        let r = simulate_p1(&CircuitSpec::qaoa1(&single_edge(2, 0), PI / 8.0, -PI / 4.0), &[(0, 1)]).unwrap();
        assert!((r.zz[0] + 1.0).abs() < 1e-12, "{}", r.zz[0]);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = CircuitSpec::qaoa1(&single_edge(2, 0), 0.1, 0.2);
        spec.terms[0].v = 5;
        assert!(matches!(simulate_p1(&spec, &[]), Err(Error::MalformedCircuit(_))));
        let mut spec = CircuitSpec::qaoa1(&single_edge(2, 0), 0.1, 0.2);
        spec.alpha[0] = f64::NAN;
        assert!(simulate_p1(&spec, &[]).is_err());
        let h = IsingHamiltonian::from_half_units(21, 0, []).unwrap();
        assert!(matches!(simulate_p1(&CircuitSpec::qaoa1(&h, 0.1, 0.2), &[]), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn uniform_sampling_and_determinism() {
        let h = IsingHamiltonian::from_half_units(2, 0, []).unwrap();
        let spec = CircuitSpec::qaoa1(&h, 0.0, 0.0);
        let samples = sample_bitstrings(&spec, 20_000, Seed(3)).unwrap();
        for b in 0..4u64 {
            let f = samples.iter().filter(|&&s| s == b).count() as f64 / samples.len() as f64;
            assert!((f - 0.25).abs() < 0.02, "{b}: {f}");
        }
        assert_eq!(samples, sample_bitstrings(&spec, 20_000, Seed(3)).unwrap());
    }

    #[test]
    fn sampled_energy_converges() {
        let h = IsingHamiltonian::from_half_units(5, 7, [(0, 1, 1), (1, 2, -1), (2, 3, -2), (3, 4, 1), (0, 4, -1)]).unwrap();
        let mut spec = CircuitSpec::qaoa1(&h, 0.3, 0.7);
        spec.alpha = vec![0.1, 0.4, -0.2, 0.9, 0.0];
        let report = simulate_p1(&spec, &[]).unwrap();
        let samples = sample_bitstrings(&spec, 10_000, Seed(8)).unwrap();
        let energies: Vec<f64> = samples
            .iter()
            .map(|&b| {
                let z: Vec<i8> = (0..5).map(|j| if b >> j & 1 == 1 { -1 } else { 1 }).collect();
                h.energy_half_units(&z).unwrap() as f64 / 2.0
            })
            .collect();
        let mean = energies.iter().sum::<f64>() / energies.len() as f64;
        let var = energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (energies.len() - 1) as f64;
        let sigma = (var / energies.len() as f64).sqrt();
        assert!((mean - report.energy).abs() < 3.0 * sigma + 1e-12, "{mean} vs {}", report.energy);
    }
}
