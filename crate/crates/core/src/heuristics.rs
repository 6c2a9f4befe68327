//! Deterministic colouring schemes: red-first, greedy, recursive greedy (RG)
//! and recursive star greedy (RSG).
//!
//! All schemes return valid colourings whose first position is red. The
//! recursive schemes are run iteratively over the original positions: the
//! chain of shrinking instances is never materialised, instead the set of
//! positions that are present at each level is kept in an ordered set and
//! neighbours of a reinserted car are looked up there.

use std::collections::BTreeSet;

use crate::encoding::{FullColoring, Paint};
use crate::instances::BpspInstance;

/// First occurrence red, second occurrence blue.
pub fn red_first(x: &BpspInstance) -> FullColoring {
    FullColoring::new(
        (0..x.word().len()).map(|i| if x.is_repeat(i) { Paint::Blue } else { Paint::Red }).collect(),
    )
}

/// Sum of the eta function over all boundaries. Equals the swap count of
/// [`red_first`].
pub fn red_first_cost_via_eta(x: &BpspInstance) -> usize {
    x.etas().iter().map(|&e| e as usize).sum()
}

/// Left to right: a first occurrence keeps the previous colour, a second
/// occurrence takes the opposite of its partner.
pub fn greedy(x: &BpspInstance) -> FullColoring {
    let len = x.word().len();
    let mut g = Vec::with_capacity(len);
    g.push(Paint::Red);
    for i in 1..len {
        let c = if x.is_repeat(i) { !g[x.partner(i)] } else { g[i - 1] };
        g.push(c);
    }
    FullColoring::new(g)
}

fn normalized(mut colours: Vec<Paint>) -> FullColoring {
    if colours.first() == Some(&Paint::Blue) {
        colours.iter_mut().for_each(|c| *c = !*c);
    }
    FullColoring::new(colours)
}

fn pred(set: &BTreeSet<usize>, p: usize) -> Option<usize> {
    set.range(..p).next_back().copied()
}

fn succ(set: &BTreeSet<usize>, p: usize) -> Option<usize> {
    set.range(p + 1..).next().copied()
}

/// Recursive greedy.
///
/// Cars are peeled off from the right (the car whose second occurrence is
/// last goes first), so they are reinserted in increasing order of their
/// second occurrence. A reinserted pair always has its second occurrence at
/// the end of the current word; its first occurrence lands in a gap with
/// neighbours `L` and `R`, and `T` is the last pre-existing car.
pub fn recursive_greedy(x: &BpspInstance) -> FullColoring {
    let len = x.word().len();
    let mut colour = vec![Paint::Red; len];
    let mut active = BTreeSet::new();
    let seconds = (0..len).filter(|&i| x.is_repeat(i));
    for q in seconds {
        let p = x.partner(q);
        if active.is_empty() {
            colour[p] = Paint::Red;
            colour[q] = Paint::Blue;
        } else {
            let left = pred(&active, p).map(|i| colour[i]);
            let right = succ(&active, p).map(|i| colour[i]);
            let last = colour[*active.iter().next_back().expect("non-empty")];
            let first = match (left, right) {
                (None, Some(r)) => r,
                (Some(l), None) => l,
                (Some(l), Some(r)) if l == r => l,
                (Some(_), Some(_)) => !last,
                (None, None) => unreachable!("active set is non-empty"),
            };
            colour[p] = first;
            colour[q] = !first;
        }
        active.insert(p);
        active.insert(q);
    }
    normalized(colour)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Paint(Paint),
    Star,
}

impl Slot {
    fn paint(self) -> Option<Paint> {
        match self {
            Slot::Paint(p) => Some(p),
            Slot::Star => None,
        }
    }
}

/// Recursive star greedy.
///
/// Cars are peeled off from the left, so they are reinserted in decreasing
/// order of their first occurrence: the reinserted first occurrence is
/// always the new front of the word and its partner lands in a gap with
/// neighbours `L`, `R`. `N` is the colour of the car right after the front.
///
/// After each insertion the previous front car (now second) is starred when
/// both of its colourings cost the same against its current, fully decided
/// neighbours. A later insertion next to a star may fix the star's colour;
/// remaining stars are resolved left to right at the end.
pub fn recursive_star_greedy(x: &BpspInstance) -> FullColoring {
    let len = x.word().len();
    let mut slot = vec![Slot::Paint(Paint::Red); len];
    let mut active: BTreeSet<usize> = BTreeSet::new();
    let firsts: Vec<usize> = (0..len).filter(|&i| !x.is_repeat(i)).collect();

    for &a in firsts.iter().rev() {
        let p = x.partner(a);
        let Some(&front) = active.iter().next() else {
            slot[a] = Slot::Paint(Paint::Red);
            slot[p] = Slot::Paint(Paint::Blue);
            active.insert(a);
            active.insert(p);
            continue;
        };
        // The front car was inserted on the previous step and is never starred.
        let n_col = slot[front].paint().expect("front car is decided");
        if p < front {
            // Pair sits at the very front: `a p front ...`.
            slot[p] = Slot::Paint(n_col);
            slot[a] = Slot::Paint(!n_col);
        } else {
            let l = pred(&active, p).expect("front precedes p");
            let r = succ(&active, p);
            let (ls, rs) = (slot[l], r.map(|r| slot[r]));
            let first = match (ls, rs) {
                (Slot::Paint(lc), Some(Slot::Paint(rc))) if lc == rc => !lc,
                (Slot::Paint(_), Some(Slot::Paint(_))) | (Slot::Paint(_), None) => n_col,
                (Slot::Star, Some(Slot::Star)) | (Slot::Star, None) => n_col,
                (Slot::Star, Some(Slot::Paint(u))) | (Slot::Paint(u), Some(Slot::Star)) => {
                    if u == n_col {
                        // p differs from U either way; settle the star on p's colour.
                        let star = if ls == Slot::Star { l } else { r.expect("star side exists") };
                        slot[star] = Slot::Paint(!n_col);
                        slot[x.partner(star)] = Slot::Paint(n_col);
                    }
                    n_col
                }
            };
            slot[a] = Slot::Paint(first);
            slot[p] = Slot::Paint(!first);
        }
        active.insert(a);
        active.insert(p);
        maybe_star(x, &active, &mut slot, front);
    }

    // Breaking ties: the first-met occurrence of a starred car copies its left
    // neighbour (red at position 0), the partner takes the opposite colour.
    let mut colours = Vec::with_capacity(len);
    for i in 0..len {
        let c = match slot[i] {
            Slot::Paint(c) => c,
            Slot::Star => {
                let c = if i == 0 { Paint::Red } else { colours[i - 1] };
                slot[x.partner(i)] = Slot::Paint(!c);
                c
            }
        };
        colours.push(c);
    }
    normalized(colours)
}

/// Stars the car at `second` (the car inserted on the previous step) when
/// both of its colourings give the same number of swaps with its decided
/// neighbours. Nothing is starred next to an undecided neighbour.
fn maybe_star(x: &BpspInstance, active: &BTreeSet<usize>, slot: &mut [Slot], second: usize) {
    let partner = x.partner(second);
    // (neighbour slot, whether it borders the occurrence coloured ¬c)
    let mut neighbours = Vec::with_capacity(4);
    for (occ, other, flipped) in [(second, partner, false), (partner, second, true)] {
        for nb in [pred(active, occ), succ(active, occ)].into_iter().flatten() {
            // The boundary between the two occurrences costs one swap either way.
            if nb != other {
                neighbours.push((slot[nb], flipped));
            }
        }
    }
    let mut decided = Vec::with_capacity(neighbours.len());
    for (s, flipped) in neighbours {
        match s.paint() {
            Some(c) => decided.push((c, flipped)),
            None => return,
        }
    }
    let cost = |c: Paint| {
        decided
            .iter()
            .filter(|&&(nb, flipped)| if flipped { nb != !c } else { nb != c })
            .count()
    };
    if cost(Paint::Red) == cost(Paint::Blue) {
        slot[second] = Slot::Star;
        slot[partner] = Slot::Star;
    }
}
