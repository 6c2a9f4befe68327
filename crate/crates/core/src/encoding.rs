//! Colouring representations and the three equivalent cost functions.
//!
//! * [`FullColoring`]: one colour per position (`2n` entries). Any string is
//!   representable; validity is checked by [`is_valid_coloring`].
//! * [`IccColoring`]: the initial-car-colour encoding, one colour per car
//!   giving the colour of its first occurrence (`n` entries).
//! * [`SpinAssignment`]: the same information as ±1 spins, with red ≡ +1 and
//!   blue ≡ −1.

use std::fmt;
use std::ops::Not;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instances::BpspInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Paint {
    Red,
    Blue,
}

impl Paint {
    pub fn spin(self) -> i8 {
        match self {
            Paint::Red => 1,
            Paint::Blue => -1,
        }
    }

    pub fn from_spin(s: i8) -> Paint {
        if s >= 0 {
            Paint::Red
        } else {
            Paint::Blue
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Paint::Red => 'r',
            Paint::Blue => 'b',
        }
    }

    fn from_char(c: char) -> Option<Paint> {
        match c {
            'r' => Some(Paint::Red),
            'b' => Some(Paint::Blue),
            _ => None,
        }
    }
}

impl Not for Paint {
    type Output = Paint;

    fn not(self) -> Paint {
        match self {
            Paint::Red => Paint::Blue,
            Paint::Blue => Paint::Red,
        }
    }
}

fn parse_paints(s: &str) -> Result<Vec<Paint>> {
    s.trim()
        .chars()
        .map(|c| {
            Paint::from_char(c).ok_or_else(|| Error::Parse { line: 1, msg: format!("bad colour `{c}`") })
        })
        .collect()
}

fn fmt_paints(paints: &[Paint], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    paints.iter().try_for_each(|p| write!(f, "{}", p.as_char()))
}

macro_rules! paint_string {
    ($name:ident) => {
        impl $name {
            pub fn new(colours: Vec<Paint>) -> Self {
                $name(colours)
            }

            pub fn colours(&self) -> &[Paint] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// Every colour flipped.
            pub fn flipped(&self) -> Self {
                $name(self.0.iter().map(|&p| !p).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_paints(&self.0, f)
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                parse_paints(s).map($name)
            }
        }
    };
}

/// A colour for every position of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FullColoring(Vec<Paint>);
paint_string!(FullColoring);

/// The colour of the first occurrence of each car (index `car - 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IccColoring(Vec<Paint>);
paint_string!(IccColoring);

impl IccColoring {
    /// Decodes bit `j` of `bits` as car `j + 1` (bit set ⇒ blue).
    pub fn from_bits(bits: u64, n: usize) -> Self {
        IccColoring((0..n).map(|j| if bits >> j & 1 == 1 { Paint::Blue } else { Paint::Red }).collect())
    }
}

/// ±1 spins, one per car. Red ≡ +1, blue ≡ −1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinAssignment(Vec<i8>);

impl SpinAssignment {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Parse { line: 1, msg: format!("spin {bad} is not ±1") });
        }
        Ok(SpinAssignment(spins))
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&IccColoring> for SpinAssignment {
    fn from(z: &IccColoring) -> Self {
        SpinAssignment(z.colours().iter().map(|p| p.spin()).collect())
    }
}

impl From<&SpinAssignment> for IccColoring {
    fn from(s: &SpinAssignment) -> Self {
        IccColoring(s.spins().iter().map(|&v| Paint::from_spin(v)).collect())
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { expected, got });
    }
    Ok(())
}

/// True iff the two occurrences of every car get different colours.
pub fn is_valid_coloring(x: &BpspInstance, f: &FullColoring) -> Result<bool> {
    check_len(x.word().len(), f.len())?;
    let c = f.colours();
    Ok((0..c.len()).all(|i| c[i] != c[x.partner(i)]))
}

/// The ICC expansion: first occurrences take the car's ICC colour, second
/// occurrences its negation. Always yields a valid colouring.
pub fn expand(x: &BpspInstance, z: &IccColoring) -> Result<FullColoring> {
    check_len(x.n(), z.len())?;
    let z = z.colours();
    Ok(FullColoring(
        (0..x.word().len())
            .map(|i| {
                let p = z[x.vertex(i)];
                if x.is_repeat(i) {
                    !p
                } else {
                    p
                }
            })
            .collect(),
    ))
}

/// Inverse of [`expand`] on valid colourings: reads each car's colour at its
/// first occurrence.
pub fn compress(x: &BpspInstance, f: &FullColoring) -> Result<IccColoring> {
    if !is_valid_coloring(x, f)? {
        return Err(Error::InvalidColoring);
    }
    let mut z = vec![Paint::Red; x.n()];
    for (i, &p) in f.colours().iter().enumerate() {
        if !x.is_repeat(i) {
            z[x.vertex(i)] = p;
        }
    }
    Ok(IccColoring(z))
}

/// Number of adjacent positions with different colours.
pub fn swap_count(f: &FullColoring) -> usize {
    f.colours().windows(2).filter(|w| w[0] != w[1]).count()
}

/// Swap count of the expansion of `z`, computed directly from the ICC bits
/// and the eta parities without expanding.
pub fn icc_swap_count(x: &BpspInstance, z: &IccColoring) -> Result<usize> {
    check_len(x.n(), z.len())?;
    let z = z.colours();
    Ok((0..x.word().len() - 1)
        .filter(|&k| {
            let left = z[x.vertex(k)];
            let left = if x.eta_at(k) == 1 { !left } else { left };
            left != z[x.vertex(k + 1)]
        })
        .count())
}

/// Swap count from the Ising form
/// `n − 1/2 − 1/2 · Σ_k (−1)^η(k) z_{x_k} z_{x_{k+1}}`, evaluated in integers
/// as twice the value.
pub fn icc_swap_count_spin(x: &BpspInstance, z: &SpinAssignment) -> Result<usize> {
    check_len(x.n(), z.len())?;
    let s = z.spins();
    let signed: i64 = (0..x.word().len() - 1)
        .map(|k| {
            let prod = (s[x.vertex(k)] * s[x.vertex(k + 1)]) as i64;
            if x.eta_at(k) == 1 {
                -prod
            } else {
                prod
            }
        })
        .sum();
    let twice = 2 * x.n() as i64 - 1 - signed;
    if twice % 2 != 0 || twice < 0 {
        return Err(Error::NonIntegerCost(twice));
    }
    Ok((twice / 2) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;
    use proptest::prelude::*;

    fn inst(w: &[usize]) -> BpspInstance {
        BpspInstance::new(w.to_vec()).unwrap()
    }

    fn full(s: &str) -> FullColoring {
        s.parse().unwrap()
    }

    fn icc(s: &str) -> IccColoring {
        s.parse().unwrap()
    }

    #[test]
    fn validity() {
        let t = inst(&[1, 2, 1, 3, 3, 2]);
        assert!(is_valid_coloring(&t, &full("rrbrbb")).unwrap());
        assert!(is_valid_coloring(&t, &full("rbbbrr")).unwrap());
        assert!(!is_valid_coloring(&t, &full("rrrrrr")).unwrap());
        assert!(is_valid_coloring(&inst(&[1, 1]), &full("rb")).unwrap());
        assert!(matches!(is_valid_coloring(&t, &full("rb")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn expand_and_compress_reference_values() {
        let t = inst(&[1, 2, 1, 3, 3, 2]);
        assert_eq!(expand(&t, &icc("rrr")).unwrap(), full("rrbrbb"));
        assert_eq!(expand(&t, &icc("rbb")).unwrap(), full("rbbbrr"));
        assert_eq!(expand(&inst(&[1, 1]), &icc("r")).unwrap(), full("rb"));
        assert_eq!(compress(&t, &full("rbbbrr")).unwrap(), icc("rbb"));
        assert_eq!(compress(&t, &full("rrbrbb")).unwrap(), icc("rrr"));
        assert_eq!(compress(&inst(&[1, 1]), &full("rb")).unwrap(), icc("r"));
        assert!(matches!(compress(&t, &full("rrrrrr")), Err(Error::InvalidColoring)));
        assert!(matches!(expand(&t, &icc("rr")), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn swap_counts_reference_values() {
        let t = inst(&[1, 2, 1, 3, 3, 2]);
        assert_eq!(swap_count(&full("rrbrbb")), 3);
        assert_eq!(swap_count(&full("rbbbrr")), 2);
        assert_eq!(swap_count(&full("bbbb")), 0);
        assert_eq!(icc_swap_count(&t, &icc("rbb")).unwrap(), 2);
        assert_eq!(icc_swap_count(&t, &icc("rrr")).unwrap(), 3);
        assert_eq!(icc_swap_count(&inst(&[1, 1]), &icc("r")).unwrap(), 1);
        let spins = |v: &[i8]| SpinAssignment::new(v.to_vec()).unwrap();
        assert_eq!(icc_swap_count_spin(&t, &spins(&[1, -1, -1])).unwrap(), 2);
        assert_eq!(icc_swap_count_spin(&t, &spins(&[1, 1, 1])).unwrap(), 3);
        assert_eq!(icc_swap_count_spin(&inst(&[1, 1]), &spins(&[1])).unwrap(), 1);
        assert!(SpinAssignment::new(vec![1, 0]).is_err());
    }

    #[test]
    fn cost_forms_agree_exhaustively_for_small_n() {
        for n in 1..=10usize {
            for trial in 0..3u64 {
                let x = BpspInstance::random(n, Seed(1000 + trial).derive(n as u64)).unwrap();
                for bits in 0..(1u64 << n) {
                    let z = IccColoring::from_bits(bits, n);
                    let f = expand(&x, &z).unwrap();
                    let direct = swap_count(&f);
                    assert_eq!(icc_swap_count(&x, &z).unwrap(), direct);
                    assert_eq!(icc_swap_count_spin(&x, &SpinAssignment::from(&z)).unwrap(), direct);
                }
            }
        }
    }

    fn instance_and_bits() -> impl Strategy<Value = (BpspInstance, Vec<bool>)> {
        (1usize..80, any::<u64>()).prop_flat_map(|(n, seed)| {
            let x = BpspInstance::random(n, Seed(seed)).unwrap();
            (Just(x), proptest::collection::vec(any::<bool>(), n))
        })
    }

    fn to_icc(bits: &[bool]) -> IccColoring {
        IccColoring::new(bits.iter().map(|&b| if b { Paint::Blue } else { Paint::Red }).collect())
    }

    proptest! {
        #[test]
        fn expansion_is_a_bijection((x, bits) in instance_and_bits()) {
            let z = to_icc(&bits);
            let f = expand(&x, &z).unwrap();
            prop_assert!(is_valid_coloring(&x, &f).unwrap());
            prop_assert_eq!(&compress(&x, &f).unwrap(), &z);
            prop_assert_eq!(expand(&x, &compress(&x, &f).unwrap()).unwrap(), f);
        }

        #[test]
        fn cost_is_invariant_under_global_flip((x, bits) in instance_and_bits()) {
            let z = to_icc(&bits);
            let c = icc_swap_count(&x, &z).unwrap();
            prop_assert_eq!(c, icc_swap_count(&x, &z.flipped()).unwrap());
            prop_assert_eq!(c, swap_count(&expand(&x, &z).unwrap()));
            prop_assert_eq!(c, icc_swap_count_spin(&x, &SpinAssignment::from(&z)).unwrap());
        }
    }
}
