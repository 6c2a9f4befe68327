use crate::error::{Error, Result};
use crate::oracles::{simulate_p1, CircuitSpec, PhaseTerm, MAX_QUBITS};
use crate::qaoa::XqaoaParams;
use crate::reduction::IsingHamiltonian;

/// Dense simulation of the circuit restricted to the qubits that can
/// influence `Z` on `centre`: the centre spins, their neighbours, and only
/// the phase terms touching a centre spin.
fn simulate_lightcone(h: &IsingHamiltonian, p: &XqaoaParams, centre: &[usize]) -> Result<f64> {
    p.check(h)?;
    if let Some(&c) = centre.iter().find(|&&c| c >= h.n()) {
        return Err(Error::VertexOutOfRange(c));
    }
    let touching: Vec<(usize, (usize, usize, f64))> =
        h.couplings().enumerate().filter(|(_, (a, b, _))| centre.contains(a) || centre.contains(b)).collect();
    let mut qubits: Vec<usize> = centre.to_vec();
    qubits.extend(touching.iter().flat_map(|(_, (a, b, _))| [*a, *b]));
    qubits.sort_unstable();
    qubits.dedup();
    if qubits.len() > MAX_QUBITS {
        let (u, v) = (centre[0], *centre.last().unwrap());
        return Err(Error::LightconeTooLarge(u, v, qubits.len()));
    }
    let local = |q: usize| qubits.binary_search(&q).expect("qubit is in the lightcone");
    let spec = CircuitSpec {
        n: qubits.len(),
        offset: 0.0,
        terms: touching
            .iter()
            .map(|&(e, (a, b, j))| PhaseTerm { u: local(a), v: local(b), coupling: j, gamma: p.gamma()[e] })
            .collect(),
        beta: qubits.iter().map(|&q| p.beta()[q]).collect(),
        alpha: qubits.iter().map(|&q| p.alpha()[q]).collect(),
    };
    let report = match centre {
        [j] => simulate_p1(&spec, &[])?.z[local(*j)],
        [u, v] => simulate_p1(&spec, &[(local(*u), local(*v))])?.zz[0],
        _ => unreachable!("one or two centre spins"),
    };
    Ok(report)
}

/// `⟨Z_u Z_v⟩` by dense simulation of the pair's lightcone.
pub fn lightcone_pair_expectation(h: &IsingHamiltonian, p: &XqaoaParams, u: usize, v: usize) -> Result<f64> {
    if u == v {
        return Err(Error::Config(format!("pair ({u}, {v}) is not two distinct spins")));
    }
    simulate_lightcone(h, p, &[u, v])
}

/// `⟨Z_j⟩` by dense simulation of the spin's lightcone.
pub fn lightcone_single_expectation(h: &IsingHamiltonian, p: &XqaoaParams, j: usize) -> Result<f64> {
    simulate_lightcone(h, p, &[j])
}
