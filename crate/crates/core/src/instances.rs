//! BPSP instances: validation, random generation, the eta function and the
//! line-oriented text format.
//!
//! Symbols are 1-based (`1..=n`) both in memory and on disk. Positions in
//! slices are 0-based as usual; the one exception is [`BpspInstance::eta`],
//! which takes the 1-based boundary index `i ∈ 1..=2n-1` of the boundary
//! between cars `i` and `i + 1`.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seed::Seed;

/// A double-occurrence word over `1..=n` of length `2n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BpspInstance {
    word: Vec<usize>,
    /// `repeat[i]` is true when position `i` holds the second occurrence of its symbol.
    repeat: Vec<bool>,
    /// Position of the other occurrence of the symbol at each position.
    partner: Vec<usize>,
}

impl BpspInstance {
    /// Validates a word. Returns the instance iff every symbol in `1..=n`
    /// occurs exactly twice, where `n = len / 2`.
    pub fn new(word: Vec<usize>) -> Result<Self> {
        if word.len() % 2 != 0 {
            return Err(Error::OddLength(word.len()));
        }
        if word.is_empty() {
            return Err(Error::EmptyInstance);
        }
        let n = word.len() / 2;
        let mut first = vec![usize::MAX; n + 1];
        let mut count = vec![0u8; n + 1];
        let mut repeat = vec![false; word.len()];
        let mut partner = vec![0; word.len()];
        for (i, &s) in word.iter().enumerate() {
            if s == 0 || s > n {
                return Err(Error::SymbolOutOfRange(s));
            }
            count[s] = count[s].saturating_add(1);
            match count[s] {
                1 => first[s] = i,
                2 => {
                    repeat[i] = true;
                    partner[i] = first[s];
                    partner[first[s]] = i;
                }
                _ => return Err(Error::SymbolCountNotTwo(s)),
            }
        }
        if let Some(s) = (1..=n).find(|&s| count[s] != 2) {
            return Err(Error::SymbolCountNotTwo(s));
        }
        Ok(BpspInstance { word, repeat, partner })
    }

    /// Uniformly random instance: a Fisher–Yates shuffle of `{1,1,2,2,…,n,n}`.
    pub fn random(n: usize, seed: Seed) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInstance);
        }
        let mut word: Vec<usize> = (1..=n).flat_map(|s| [s, s]).collect();
        word.shuffle(&mut seed.rng());
        Self::new(word)
    }

    /// Number of distinct cars.
    pub fn n(&self) -> usize {
        self.word.len() / 2
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// True when position `i` (0-based) is the second occurrence of its symbol.
    pub fn is_repeat(&self, i: usize) -> bool {
        self.repeat[i]
    }

    /// 0-based position of the other occurrence of the symbol at position `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    /// 0-based vertex index (`symbol - 1`) of the car at position `i`.
    pub fn vertex(&self, i: usize) -> usize {
        self.word[i] - 1
    }

    /// The eta function at the 1-based boundary `i`: 1 when exactly one of
    /// the two cars at positions `i`, `i + 1` is a second occurrence.
    pub fn eta(&self, i: usize) -> Result<u8> {
        let max = self.word.len() - 1;
        if i == 0 || i > max {
            return Err(Error::PositionOutOfRange { pos: i, max });
        }
        Ok(self.eta_at(i - 1))
    }

    /// Eta for the boundary between 0-based positions `k` and `k + 1`.
    pub(crate) fn eta_at(&self, k: usize) -> u8 {
        (self.repeat[k] ^ self.repeat[k + 1]) as u8
    }

    /// Eta for every boundary, 0-based (`etas()[k]` is the boundary after position `k`).
    pub fn etas(&self) -> Vec<u8> {
        (0..self.word.len() - 1).map(|k| self.eta_at(k)).collect()
    }

    /// Number of boundaries whose two cars are the same model.
    pub fn double_letter_count(&self) -> usize {
        self.word.windows(2).filter(|w| w[0] == w[1]).count()
    }
}

impl fmt::Display for BpspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for BpspInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|e| Error::Parse {
                    line: 1,
                    msg: format!("bad symbol `{tok}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BpspInstance::new(word)
    }
}

/// Reads instances, one per line. Blank lines and `#` comments are skipped.
pub fn read_instances<R: BufRead>(reader: R) -> Result<Vec<BpspInstance>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let inst = trimmed.parse::<BpspInstance>().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: lineno + 1, msg },
            other => Error::Parse { line: lineno + 1, msg: other.to_string() },
        })?;
        out.push(inst);
    }
    Ok(out)
}

pub fn write_instances<W: Write>(mut writer: W, instances: &[BpspInstance]) -> Result<()> {
    for inst in instances {
        writeln!(writer, "{inst}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t() -> BpspInstance {
        BpspInstance::new(vec![1, 2, 1, 3, 3, 2]).unwrap()
    }

    #[test]
    fn validates_examples() {
        assert_eq!(t().n(), 3);
        assert_eq!(BpspInstance::new(vec![1, 1]).unwrap().n(), 1);
        assert!(matches!(BpspInstance::new(vec![1, 2, 1]), Err(Error::OddLength(3))));
        assert!(matches!(BpspInstance::new(vec![1, 1, 1, 2]), Err(Error::SymbolCountNotTwo(1))));
        assert!(matches!(BpspInstance::new(vec![1, 3]), Err(Error::SymbolOutOfRange(3))));
        assert!(matches!(BpspInstance::new(vec![0, 0]), Err(Error::SymbolOutOfRange(0))));
        assert!(matches!(BpspInstance::new(vec![]), Err(Error::EmptyInstance)));
    }

    #[test]
    fn eta_on_reference_word() {
        let t = t();
        let etas: Vec<u8> = (1..=5).map(|i| t.eta(i).unwrap()).collect();
        assert_eq!(etas, vec![0, 1, 1, 1, 0]);
        assert!(t.eta(0).is_err());
        assert!(t.eta(6).is_err());
    }

    #[test]
    fn double_letters() {
        assert_eq!(t().double_letter_count(), 1);
        assert_eq!(BpspInstance::new(vec![1, 1, 2, 2]).unwrap().double_letter_count(), 2);
        assert_eq!(BpspInstance::new(vec![1, 2, 1, 2]).unwrap().double_letter_count(), 0);
    }

    #[test]
    fn generation() {
        assert_eq!(BpspInstance::random(1, Seed(99)).unwrap().word(), &[1, 1]);
        assert_eq!(BpspInstance::random(3, Seed(5)).unwrap(), BpspInstance::random(3, Seed(5)).unwrap());
        assert!(matches!(BpspInstance::random(0, Seed(1)), Err(Error::EmptyInstance)));
    }

    #[test]
    fn text_format_skips_comments_and_blanks() {
        let text = "# header\n1 2 1 3 3 2\n\n  1 1 \n";
        let insts = read_instances(text.as_bytes()).unwrap();
        assert_eq!(insts.len(), 2);
        assert_eq!(insts[0], t());
        let mut buf = Vec::new();
        write_instances(&mut buf, &insts).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 2 1 3 3 2\n1 1\n");
        let err = read_instances("1 1\n1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    /// Streaming eta with a "seen" set, written independently of `eta_at`.
    fn eta_streaming(word: &[usize]) -> Vec<u8> {
        let mut seen = std::collections::HashSet::new();
        let mut seen_before = Vec::with_capacity(word.len());
        for &s in word {
            seen_before.push(!seen.insert(s));
        }
        seen_before.windows(2).map(|w| (w[0] != w[1]) as u8).collect()
    }

    /// The definition verbatim: membership tests against prefixes.
    fn eta_direct(word: &[usize], k: usize) -> u8 {
        let next_seen = word[..=k].contains(&word[k + 1]);
        let cur_seen = word[..k].contains(&word[k]);
        (next_seen ^ cur_seen) as u8
    }

    proptest! {
        #[test]
        fn generated_instances_are_valid(n in 1usize..200, seed in any::<u64>()) {
            let inst = BpspInstance::random(n, Seed(seed)).unwrap();
            prop_assert!(BpspInstance::new(inst.word().to_vec()).is_ok());
            prop_assert_eq!(inst.word().len(), 2 * n);
        }

        #[test]
        fn eta_agrees_with_streaming_definition(n in 1usize..100, seed in any::<u64>()) {
            let inst = BpspInstance::random(n, Seed(seed)).unwrap();
            let etas = inst.etas();
            prop_assert_eq!(&etas, &eta_streaming(inst.word()));
            for (k, &e) in etas.iter().enumerate() {
                prop_assert_eq!(e, eta_direct(inst.word(), k));
            }
            for (k, w) in inst.word().windows(2).enumerate() {
                if w[0] == w[1] {
                    prop_assert_eq!(etas[k], 1);
                }
            }
        }
    }
}
