//! Depth-1 QAOA and XQAOA: exact expectation values, gradients, parameter
//! optimisation and rounding.
//!
//! Every depth-1 two-point function only sees the two endpoints and their
//! neighbours. The closed forms below work on a [`PairStencil`] that lists
//! those neighbours, split into the ones adjacent to only one endpoint and
//! the common ones.

mod backend;
mod lbfgs;
mod lightcone;
mod qaoa1;
mod xqaoa;

pub use backend::{expectation_backend, ClosedForm, ExpectationBackend, Lightcone, Statevector, EXPECTATION_BACKENDS};
pub use lbfgs::{minimize, LbfgsOptions, LbfgsResult};
pub use lightcone::{lightcone_pair_expectation, lightcone_single_expectation};
pub use qaoa1::{qaoa1_energy, qaoa1_optimize, qaoa1_pair_expectation, Qaoa1Model, Qaoa1Params};
pub use xqaoa::{
    extract_cut, xqaoa_energy, xqaoa_gradient, xqaoa_optimize, xqaoa_optimize_all, xqaoa_solve, MixerKind,
    RestartOutcome, XqaoaMaxCut, XqaoaModel, XqaoaOptions, XqaoaParams, XqaoaSolution,
};

use crate::error::{Error, Result};

/// Neighbour `w` of an endpoint: coupling in half units and coupling index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Arm {
    pub k: i64,
    pub edge: usize,
}

/// Neighbourhood of the pair `(u, v)` with `u` and `v` themselves removed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct PairStencil {
    /// The `(u, v)` coupling, if any.
    pub direct: Option<Arm>,
    pub u_only: Vec<Arm>,
    pub v_only: Vec<Arm>,
    /// `(u–w, v–w)` arms of every common neighbour `w`.
    pub common: Vec<(Arm, Arm)>,
}

/// Sorted adjacency `(w, k, edge)` built from half-unit couplings.
pub(crate) type Adjacency = Vec<Vec<(usize, i64, usize)>>;

pub(crate) fn adjacency(n: usize, couplings2: &[(usize, usize, i64)]) -> Adjacency {
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v, k)) in couplings2.iter().enumerate() {
        adj[u].push((v, k, e));
        adj[v].push((u, k, e));
    }
    adj.iter_mut().for_each(|a| a.sort_unstable_by_key(|&(w, _, _)| w));
    adj
}

pub(crate) fn pair_stencil(adj: &Adjacency, u: usize, v: usize) -> Result<PairStencil> {
    let n = adj.len();
    if u >= n || v >= n {
        return Err(Error::VertexOutOfRange(u.max(v)));
    }
    if u == v {
        return Err(Error::Config(format!("pair ({u}, {v}) is not two distinct spins")));
    }
    let mut s = PairStencil::default();
    let (a, b) = (&adj[u], &adj[v]);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let wa = a.get(i).map_or(usize::MAX, |x| x.0);
        let wb = b.get(j).map_or(usize::MAX, |x| x.0);
        if wa == v {
            s.direct = Some(Arm { k: a[i].1, edge: a[i].2 });
            i += 1;
        } else if wb == u {
            j += 1;
        } else if wa == wb {
            s.common.push((Arm { k: a[i].1, edge: a[i].2 }, Arm { k: b[j].1, edge: b[j].2 }));
            i += 1;
            j += 1;
        } else if wa < wb {
            s.u_only.push(Arm { k: a[i].1, edge: a[i].2 });
            i += 1;
        } else {
            s.v_only.push(Arm { k: b[j].1, edge: b[j].2 });
            j += 1;
        }
    }
    Ok(s)
}

/// Products of all entries but one, for every position.
pub(crate) fn products_excluding_one(f: &[f64], out: &mut Vec<f64>) {
    out.clear();
    out.resize(f.len(), 1.0);
    let mut acc = 1.0;
    for i in 0..f.len() {
        out[i] = acc;
        acc *= f[i];
    }
    acc = 1.0;
    for i in (0..f.len()).rev() {
        out[i] *= acc;
        acc *= f[i];
    }
}
