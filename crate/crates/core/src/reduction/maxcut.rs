use crate::encoding::{expand, FullColoring, IccColoring, Paint};
use crate::error::{Error, Result};
use crate::heuristics::red_first_cost_via_eta;
use crate::instances::BpspInstance;
use crate::reduction::{build_graph, BpspGraph};

pub const MAX_BRUTE_FORCE_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCutSolution {
    pub value: i64,
    /// Side of each vertex; `Red` and `Blue` name the two shores.
    pub cut: IccColoring,
}

/// A weighted MaxCut solver, exact or heuristic.
pub trait MaxCutBackend: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, g: &BpspGraph) -> Result<MaxCutSolution>;
}

/// Exhaustive search in Gray-code order with vertex 0 pinned to `Red`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceMaxCut;

impl MaxCutBackend for BruteForceMaxCut {
    fn name(&self) -> &str {
        "brute"
    }

    fn solve(&self, g: &BpspGraph) -> Result<MaxCutSolution> {
        let n = g.n();
        if n > MAX_BRUTE_FORCE_VERTICES {
            return Err(Error::TooLarge { what: "brute-force MaxCut vertex count", max: MAX_BRUTE_FORCE_VERTICES, got: n });
        }
        if n == 0 {
            return Ok(MaxCutSolution { value: 0, cut: IccColoring::new(vec![]) });
        }
        let mut side = vec![false; n];
        let (mut cut, mut best, mut best_bits) = (0i64, 0i64, 0u64);
        let mut bits = 0u64;
        for k in 1u64..1 << (n - 1) {
            let v = k.trailing_zeros() as usize + 1;
            let delta: i64 =
                g.neighbours(v).iter().map(|&(w, wt)| if side[v] == side[w] { wt } else { -wt }).sum();
            side[v] = !side[v];
            bits ^= 1 << v;
            cut += delta;
            if cut > best {
                best = cut;
                best_bits = bits;
            }
        }
        Ok(MaxCutSolution { value: best, cut: IccColoring::from_bits(best_bits, n) })
    }
}

/// Solves BPSP through one MaxCut call on the BPSP graph. Exact whenever the
/// backend is.
pub fn bpsp_via_maxcut(x: &BpspInstance, backend: &dyn MaxCutBackend) -> Result<(usize, FullColoring)> {
    let g = build_graph(x);
    let sol = backend.solve(&g)?;
    let cost = red_first_cost_via_eta(x) as i64 - sol.value;
    if cost < 0 {
        return Err(Error::Solver { solver: backend.name().to_string(), msg: format!("cut value {} exceeds red-first cost", sol.value) });
    }
    // Any shore assignment is a legal ICC string; normalise to a red first car.
    let cut = if sol.cut.colours().first() == Some(&Paint::Blue) { sol.cut.flipped() } else { sol.cut };
    Ok((cost as usize, expand(x, &cut)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{is_valid_coloring, swap_count};

    fn t() -> BpspInstance {
        BpspInstance::new(vec![1, 2, 1, 3, 3, 2]).unwrap()
    }

    #[test]
    fn small_graphs() {
        let g = build_graph(&t());
        let sol = BruteForceMaxCut.solve(&g).unwrap();
        assert_eq!(sol.value, 1);
        assert_eq!(g.cut_weight(&sol.cut).unwrap(), 1);
        let plus = BpspGraph::from_edges(2, [(0, 1, 1)]).unwrap();
        assert_eq!(BruteForceMaxCut.solve(&plus).unwrap().value, 1);
        let minus = BpspGraph::from_edges(2, [(0, 1, -1)]).unwrap();
        assert_eq!(BruteForceMaxCut.solve(&minus).unwrap().value, 0);
        let big = BpspGraph::from_edges(25, []).unwrap();
        assert!(matches!(BruteForceMaxCut.solve(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn reduction_examples() {
        let (cost, f) = bpsp_via_maxcut(&t(), &BruteForceMaxCut).unwrap();
        assert_eq!(cost, 2);
        assert_eq!(swap_count(&f), 2);
        assert!(is_valid_coloring(&t(), &f).unwrap());
        let table1 = BpspInstance::new(vec![5, 1, 1, 3, 2, 2, 5, 4, 3, 6, 6, 4]).unwrap();
        assert_eq!(bpsp_via_maxcut(&table1, &BruteForceMaxCut).unwrap().0, 4);
        let (cost, f) = bpsp_via_maxcut(&BpspInstance::new(vec![1, 1]).unwrap(), &BruteForceMaxCut).unwrap();
        assert_eq!((cost, f.to_string().as_str()), (1, "rb"));
    }
}
