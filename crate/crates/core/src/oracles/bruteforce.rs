use crate::encoding::{expand, FullColoring, IccColoring};
use crate::error::{Error, Result};
use crate::instances::BpspInstance;

const MAX_CARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceSolution {
    pub cost: usize,
    pub icc: IccColoring,
    pub coloring: FullColoring,
}

/// Exhaustive minimum over ICC strings with the first car red, enumerated in
/// Gray-code order so each step only revisits the flipped car's boundaries.
pub fn bpsp_bruteforce(x: &BpspInstance) -> Result<BruteForceSolution> {
    let n = x.n();
    if n > MAX_CARS {
        return Err(Error::TooLarge { what: "brute-force BPSP car count", max: MAX_CARS, got: n });
    }
    let len = x.word().len();
    // A boundary contributes a swap iff (z_a != z_b) xor eta.
    let mut term: Vec<bool> = (0..len - 1).map(|k| x.eta_at(k) == 1).collect();
    let mut touching = vec![Vec::new(); n];
    for k in 0..len - 1 {
        let (a, b) = (x.vertex(k), x.vertex(k + 1));
        if a != b {
            touching[a].push(k);
            touching[b].push(k);
        }
    }
    let mut cost = term.iter().filter(|&&t| t).count() as i64;
    let (mut best, mut best_bits, mut bits) = (cost, 0u64, 0u64);
    for step in 1u64..1 << (n - 1) {
        let v = step.trailing_zeros() as usize + 1;
        for &k in &touching[v] {
            cost += if term[k] { -1 } else { 1 };
            term[k] = !term[k];
        }
        bits ^= 1 << v;
        if cost < best {
            best = cost;
            best_bits = bits;
        }
    }
    let icc = IccColoring::from_bits(best_bits, n);
    let coloring = expand(x, &icc)?;
    Ok(BruteForceSolution { cost: best as usize, icc, coloring })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{icc_swap_count, swap_count};
    use crate::seed::Seed;

    #[test]
    fn known_optima() {
        let t = BpspInstance::new(vec![1, 2, 1, 3, 3, 2]).unwrap();
        let sol = bpsp_bruteforce(&t).unwrap();
        assert_eq!(sol.cost, 2);
        assert_eq!(swap_count(&sol.coloring), 2);
        let ladder = BpspInstance::new(vec![5, 1, 1, 3, 2, 2, 5, 4, 3, 6, 6, 4]).unwrap();
        assert_eq!(bpsp_bruteforce(&ladder).unwrap().cost, 4);
        assert_eq!(bpsp_bruteforce(&BpspInstance::new(vec![1, 1]).unwrap()).unwrap().cost, 1);
        assert!(bpsp_bruteforce(&BpspInstance::random(25, Seed(1)).unwrap()).is_err());
    }

    #[test]
    fn matches_plain_enumeration() {
        for i in 0..40u64 {
            let n = 1 + (i as usize % 9);
            let x = BpspInstance::random(n, Seed(77).derive(i)).unwrap();
            let direct = (0..1u64 << n)
                .map(|b| icc_swap_count(&x, &IccColoring::from_bits(b, n)).unwrap())
                .min()
                .unwrap();
            let sol = bpsp_bruteforce(&x).unwrap();
            assert_eq!(sol.cost, direct);
            assert_eq!(icc_swap_count(&x, &sol.icc).unwrap(), direct);
        }
    }
}
