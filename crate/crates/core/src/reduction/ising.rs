use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::encoding::SpinAssignment;
use crate::error::{Error, Result};
use crate::instances::BpspInstance;
use crate::reduction::BpspGraph;

/// `offset + Σ J_uv z_u z_v` over spins `z ∈ {−1, +1}^n`.
///
/// Offset and couplings are stored as integers scaled by 2 ("half units"),
/// so contraction and energy evaluation stay exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingHamiltonian {
    n: usize,
    offset2: i64,
    /// Sorted by `(u, v)` with `u < v`, never zero.
    couplings2: Vec<(usize, usize, i64)>,
}

impl IsingHamiltonian {
    /// Couplings are given in half units; duplicates are summed, zeros dropped.
    pub fn from_half_units(
        n: usize,
        offset2: i64,
        couplings2: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut merged = BTreeMap::new();
        for (u, v, j) in couplings2 {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange(u.max(v)));
            }
            if u == v {
                return Err(Error::Config(format!("self-coupling on spin {u}")));
            }
            *merged.entry((u.min(v), u.max(v))).or_insert(0i64) += j;
        }
        let couplings2 = merged.into_iter().filter(|&(_, j)| j != 0).map(|((u, v), j)| (u, v, j)).collect();
        Ok(IsingHamiltonian { n, offset2, couplings2 })
    }

    /// Hamiltonian whose energy is minus the cut weight of `g`.
    pub fn from_maxcut(g: &BpspGraph) -> Self {
        let offset2 = -g.total_weight();
        let couplings2 = g.edges().to_vec();
        IsingHamiltonian { n: g.n(), offset2, couplings2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset2 as f64 / 2.0
    }

    pub fn offset_half_units(&self) -> i64 {
        self.offset2
    }

    /// `(u, v, 2 J_uv)` for every non-zero coupling, `u < v`, sorted.
    pub fn couplings_half_units(&self) -> &[(usize, usize, i64)] {
        &self.couplings2
    }

    /// `(u, v, J_uv)` in canonical order.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.couplings2.iter().map(|&(u, v, j)| (u, v, j as f64 / 2.0))
    }

    pub fn num_couplings(&self) -> usize {
        self.couplings2.len()
    }

    pub fn coupling(&self, u: usize, v: usize) -> f64 {
        let key = (u.min(v), u.max(v));
        self.couplings2
            .binary_search_by(|&(a, b, _)| (a, b).cmp(&key))
            .map_or(0.0, |i| self.couplings2[i].2 as f64 / 2.0)
    }

    /// Twice the energy, exactly.
    pub fn energy_half_units(&self, z: &[i8]) -> Result<i64> {
        if z.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: z.len() });
        }
        Ok(self.offset2 + self.couplings2.iter().map(|&(u, v, j)| j * (z[u] * z[v]) as i64).sum::<i64>())
    }

    pub fn energy(&self, z: &SpinAssignment) -> Result<f64> {
        Ok(self.energy_half_units(z.spins())? as f64 / 2.0)
    }

    /// Header `n offset_num offset_den`, then `u v j_num j_den` (1-based,
    /// reduced fractions).
    pub fn to_text(&self) -> String {
        let (on, od) = half_fraction(self.offset2);
        let mut s = format!("{} {} {}\n", self.n, on, od);
        for &(u, v, j) in &self.couplings2 {
            let (jn, jd) = half_fraction(j);
            let _ = writeln!(s, "{} {} {} {}", u + 1, v + 1, jn, jd);
        }
        s
    }
}

fn half_fraction(x2: i64) -> (i64, i64) {
    if x2 % 2 == 0 {
        (x2 / 2, 1)
    } else {
        (x2, 2)
    }
}

/// Hamiltonian whose energy on a spin assignment is the swap count of the
/// corresponding ICC colouring.
pub fn build_ising(x: &BpspInstance) -> IsingHamiltonian {
    let n = x.n() as i64;
    let mut offset2 = 2 * n - 1;
    let mut terms = Vec::new();
    for k in 0..x.word().len() - 1 {
        // −(1/2)(−1)^η z z, doubled.
        let j2 = if x.eta_at(k) == 1 { 1 } else { -1 };
        let (u, v) = (x.vertex(k), x.vertex(k + 1));
        if u == v {
            offset2 += j2;
        } else {
            terms.push((u, v, j2));
        }
    }
    IsingHamiltonian::from_half_units(x.n(), offset2, terms).expect("boundaries reference valid vertices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{icc_swap_count, IccColoring};
    use crate::reduction::build_graph;
    use crate::seed::Seed;

    fn t() -> BpspInstance {
        BpspInstance::new(vec![1, 2, 1, 3, 3, 2]).unwrap()
    }

    #[test]
    fn reference_instance() {
        let h = build_ising(&t());
        assert_eq!(h.offset(), 3.0);
        assert_eq!(h.couplings_half_units(), &[(0, 2, 1), (1, 2, -1)]);
        assert_eq!(h.coupling(2, 0), 0.5);
        assert_eq!(h.coupling(0, 1), 0.0);
        assert_eq!(h.energy(&SpinAssignment::new(vec![1, -1, -1]).unwrap()).unwrap(), 2.0);
        assert_eq!(h.to_text(), "3 3 1\n1 3 1 2\n2 3 -1 2\n");
    }

    #[test]
    fn single_double_letter() {
        let h = build_ising(&BpspInstance::new(vec![1, 1]).unwrap());
        assert_eq!(h.offset(), 1.0);
        assert_eq!(h.num_couplings(), 0);
    }

    #[test]
    fn merging_and_validation() {
        let h = IsingHamiltonian::from_half_units(3, 0, [(0, 1, 1), (1, 0, -1), (1, 2, 3)]).unwrap();
        assert_eq!(h.couplings_half_units(), &[(1, 2, 3)]);
        assert_eq!(h.to_text(), "3 0 1\n2 3 3 2\n");
        assert!(IsingHamiltonian::from_half_units(2, 0, [(0, 2, 1)]).is_err());
        assert!(IsingHamiltonian::from_half_units(2, 0, [(1, 1, 1)]).is_err());
        assert!(h.energy_half_units(&[1, 1]).is_err());
    }

    #[test]
    fn energy_equals_swap_count_exhaustively() {
        for i in 0..30u64 {
            let n = 1 + (i as usize % 10);
            let x = BpspInstance::random(n, Seed(21).derive(i)).unwrap();
            let h = build_ising(&x);
            let g = build_graph(&x);
            assert_eq!(h.offset_half_units(), 2 * n as i64 - 1 + x.double_letter_count() as i64);
            for &(u, v, j2) in h.couplings_half_units() {
                assert_eq!(j2, g.weight(u, v));
            }
            assert_eq!(h.num_couplings(), g.edges().len());
            let maxcut = IsingHamiltonian::from_maxcut(&g);
            for bits in 0..1u64 << n {
                let z = IccColoring::from_bits(bits, n);
                let s = SpinAssignment::from(&z);
                let cost = icc_swap_count(&x, &z).unwrap() as i64;
                assert_eq!(h.energy_half_units(s.spins()).unwrap(), 2 * cost);
                assert_eq!(maxcut.energy_half_units(s.spins()).unwrap(), -2 * g.cut_weight(&z).unwrap());
            }
        }
    }
}
