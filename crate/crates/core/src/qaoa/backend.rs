//! Interchangeable engines for XQAOA_1 expectation values, selected by name.

use crate::error::{Error, Result};
use crate::oracles::simulate_p1;
use crate::qaoa::lightcone::{lightcone_pair_expectation, lightcone_single_expectation};
use crate::qaoa::{XqaoaModel, XqaoaParams};
use crate::reduction::IsingHamiltonian;

pub trait ExpectationBackend: Send + Sync {
    fn name(&self) -> &'static str;

    fn pair(&self, h: &IsingHamiltonian, p: &XqaoaParams, u: usize, v: usize) -> Result<f64>;

    fn single(&self, h: &IsingHamiltonian, p: &XqaoaParams, j: usize) -> Result<f64>;

    fn energy(&self, h: &IsingHamiltonian, p: &XqaoaParams) -> Result<f64> {
        let mut e = h.offset();
        for (u, v, j) in h.couplings() {
            e += j * self.pair(h, p, u, v)?;
        }
        Ok(e)
    }
}

/// Full-system dense simulation; at most 20 spins.
#[derive(Debug, Clone, Copy, Default)]
pub struct Statevector;

impl ExpectationBackend for Statevector {
    fn name(&self) -> &'static str {
        "statevector"
    }

    fn pair(&self, h: &IsingHamiltonian, p: &XqaoaParams, u: usize, v: usize) -> Result<f64> {
        Ok(simulate_p1(&p.circuit(h)?, &[(u, v)])?.zz[0])
    }

    fn single(&self, h: &IsingHamiltonian, p: &XqaoaParams, j: usize) -> Result<f64> {
        if j >= h.n() {
            return Err(Error::VertexOutOfRange(j));
        }
        Ok(simulate_p1(&p.circuit(h)?, &[])?.z[j])
    }

    fn energy(&self, h: &IsingHamiltonian, p: &XqaoaParams) -> Result<f64> {
        Ok(simulate_p1(&p.circuit(h)?, &[])?.energy)
    }
}

/// Dense simulation of each observable's lightcone.
#[derive(Debug, Clone, Copy, Default)]
pub struct Lightcone;

impl ExpectationBackend for Lightcone {
    fn name(&self) -> &'static str {
        "lightcone"
    }

    fn pair(&self, h: &IsingHamiltonian, p: &XqaoaParams, u: usize, v: usize) -> Result<f64> {
        lightcone_pair_expectation(h, p, u, v)
    }

    fn single(&self, h: &IsingHamiltonian, p: &XqaoaParams, j: usize) -> Result<f64> {
        lightcone_single_expectation(h, p, j)
    }
}

/// Closed-form reduced-state formulas; no size limit.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl ExpectationBackend for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn pair(&self, h: &IsingHamiltonian, p: &XqaoaParams, u: usize, v: usize) -> Result<f64> {
        XqaoaModel::new(h).pair_expectation(p, u, v)
    }

    fn single(&self, h: &IsingHamiltonian, p: &XqaoaParams, j: usize) -> Result<f64> {
        let z = XqaoaModel::new(h).single_expectations(p)?;
        z.get(j).copied().ok_or(Error::VertexOutOfRange(j))
    }

    fn energy(&self, h: &IsingHamiltonian, p: &XqaoaParams) -> Result<f64> {
        XqaoaModel::new(h).energy(p)
    }
}

pub const EXPECTATION_BACKENDS: [&str; 3] = ["statevector", "lightcone", "closed-form"];

pub fn expectation_backend(name: &str) -> Result<Box<dyn ExpectationBackend>> {
    match name {
        "statevector" => Ok(Box::new(Statevector)),
        "lightcone" => Ok(Box::new(Lightcone)),
        "closed-form" => Ok(Box::new(ClosedForm)),
        _ => Err(Error::UnknownAlgorithm(name.to_string())),
    }
}
