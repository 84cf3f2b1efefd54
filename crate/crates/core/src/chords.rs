//! Chord diagrams: perfect matchings on the labels `1..=2n`.
//!
//! Labels are 1-based in the public API and 0-based in storage.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChordError {
    #[error("label {0} out of range")]
    LabelOutOfRange(u32),
    #[error("partner list is not a fixed-point-free involution")]
    NotMatching,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordDiagram {
    partner: Vec<u32>,
}

impl ChordDiagram {
    /// From a 1-based partner list: `partners[i - 1]` is the label matched
    /// with `i`.
    pub fn from_partners(partners: &[u32]) -> Result<Self, ChordError> {
        let len = partners.len() as u32;
        let mut partner = Vec::with_capacity(partners.len());
        for &p in partners {
            if p == 0 || p > len {
                return Err(ChordError::LabelOutOfRange(p));
            }
            partner.push(p - 1);
        }
        for (i, &p) in partner.iter().enumerate() {
            if p as usize == i || partner[p as usize] as usize != i {
                return Err(ChordError::NotMatching);
            }
        }
        Ok(ChordDiagram { partner })
    }

    /// From 1-based chords `(i, j)`.
    pub fn from_chords(chords: &[(u32, u32)]) -> Result<Self, ChordError> {
        let len = 2 * chords.len();
        let mut partners = vec![0; len];
        for &(i, j) in chords {
            for x in [i, j] {
                if x == 0 || x as usize > len {
                    return Err(ChordError::LabelOutOfRange(x));
                }
            }
            if partners[i as usize - 1] != 0 || partners[j as usize - 1] != 0 {
                return Err(ChordError::NotMatching);
            }
            partners[i as usize - 1] = j;
            partners[j as usize - 1] = i;
        }
        Self::from_partners(&partners)
    }

    pub fn n_chords(&self) -> usize {
        self.partner.len() / 2
    }

    /// Label matched with `label` (both 1-based).
    pub fn partner(&self, label: u32) -> u32 {
        self.partner[label as usize - 1] + 1
    }

    /// 1-based partner list.
    pub fn partners(&self) -> Vec<u32> {
        self.partner.iter().map(|p| p + 1).collect()
    }
}

/// No proper prefix `{1..2k}` is matched within itself. A prefix is closed
/// exactly when the largest partner seen so far is its last label.
pub fn is_indecomposable(d: &ChordDiagram) -> bool {
    let len = d.partner.len();
    let mut reach = 0;
    for (i, &p) in d.partner.iter().enumerate().take(len.saturating_sub(1)) {
        reach = reach.max(p as usize);
        if reach == i {
            return false;
        }
    }
    true
}

/// Chords joining consecutive labels `k` and `k + 1`.
pub fn isolated_chords(d: &ChordDiagram) -> usize {
    d.partner
        .iter()
        .enumerate()
        .filter(|&(i, &p)| p as usize == i + 1)
        .count()
}

/// Label matched with label 1.
pub fn partner_of_one(d: &ChordDiagram) -> u32 {
    d.partner(1)
}

/// All `(2n - 1)!!` diagrams with `n` chords in lexicographic order of their
/// partner lists, optionally only the indecomposable ones.
pub fn enumerate_diagrams(
    n: usize,
    only_indecomposable: bool,
) -> impl Iterator<Item = ChordDiagram> {
    Matchings::new(n).filter(move |d| !only_indecomposable || is_indecomposable(d))
}

/// Backtracking over matchings: the smallest free label is matched with each
/// larger free label in turn.
struct Matchings {
    partner: Vec<u32>,
    // stack of (opener, current partner) pairs
    stack: Vec<(u32, u32)>,
    started: bool,
    done: bool,
}

const FREE: u32 = u32::MAX;

impl Matchings {
    fn new(n: usize) -> Self {
        Matchings {
            partner: vec![FREE; 2 * n],
            stack: Vec::with_capacity(n),
            started: false,
            done: false,
        }
    }

    fn first_free(&self, from: u32) -> Option<u32> {
        (from..self.partner.len() as u32).find(|&i| self.partner[i as usize] == FREE)
    }

    /// Complete the current partial matching greedily.
    fn fill(&mut self) {
        while let Some(open) = self.first_free(0) {
            let close = self
                .first_free(open + 1)
                .expect("even number of free labels");
            self.pair(open, close);
        }
    }

    fn pair(&mut self, open: u32, close: u32) {
        self.partner[open as usize] = close;
        self.partner[close as usize] = open;
        self.stack.push((open, close));
    }

    /// Advance to the next matching; false when exhausted.
    fn advance(&mut self) -> bool {
        while let Some((open, close)) = self.stack.pop() {
            self.partner[open as usize] = FREE;
            self.partner[close as usize] = FREE;
            if let Some(next) = self.first_free(close + 1) {
                self.pair(open, next);
                self.fill();
                return true;
            }
        }
        false
    }
}

impl Iterator for Matchings {
    type Item = ChordDiagram;

    fn next(&mut self) -> Option<ChordDiagram> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(ChordDiagram {
            partner: self.partner.clone(),
        })
    }
}

/// Uniform diagram with `n` chords, built by adding chords one after another:
/// the smallest unmatched label is joined to a uniformly chosen other
/// unmatched label.
pub fn sample_diagram<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ChordDiagram {
    // decreasing, so `pop` yields the smallest unmatched label
    let mut free: Vec<u32> = (0..2 * n as u32).rev().collect();
    let mut partner = vec![0; 2 * n];
    while let Some(open) = free.pop() {
        let pick = rng.gen_range(0..free.len());
        let close = free.remove(pick);
        partner[open as usize] = close;
        partner[close as usize] = open;
    }
    ChordDiagram { partner }
}

/// Uniform indecomposable diagram with `n` chords by rejection: decomposable
/// draws are discarded. Returns the diagram and the number of draws used.
pub fn sample_indecomposable<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (ChordDiagram, u64) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let d = sample_diagram(n, rng);
        if is_indecomposable(&d) {
            return (d, attempts);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;
    use rand::SeedableRng;

    fn chords(c: &[(u32, u32)]) -> ChordDiagram {
        ChordDiagram::from_chords(c).unwrap()
    }

    #[test]
    fn indecomposability_examples() {
        assert!(is_indecomposable(&chords(&[(1, 2)])));
        assert!(!is_indecomposable(&chords(&[(1, 2), (3, 4)])));
        assert!(is_indecomposable(&chords(&[(1, 3), (2, 4)])));
        assert!(is_indecomposable(&chords(&[(1, 4), (2, 3)])));
        assert!(is_indecomposable(
            &ChordDiagram::from_partners(&[]).unwrap()
        ));
    }

    #[test]
    fn validation() {
        assert_eq!(
            ChordDiagram::from_partners(&[1, 2]),
            Err(ChordError::NotMatching)
        );
        assert_eq!(
            ChordDiagram::from_partners(&[2, 3]),
            Err(ChordError::LabelOutOfRange(3))
        );
        assert_eq!(
            ChordDiagram::from_partners(&[2, 1, 4]),
            Err(ChordError::LabelOutOfRange(4))
        );
        assert_eq!(
            ChordDiagram::from_chords(&[(1, 2), (2, 3)]),
            Err(ChordError::NotMatching)
        );
        assert_eq!(chords(&[(1, 3), (2, 4)]).partners(), vec![3, 4, 1, 2]);
    }

    #[test]
    fn enumeration_counts() {
        let totals = [1usize, 1, 3, 15, 105, 945, 10395, 135135];
        let indecomposable = [1usize, 1, 2, 10, 74, 706, 8162];
        for (n, &t) in totals.iter().enumerate() {
            assert_eq!(enumerate_diagrams(n, false).count(), t, "n={n}");
        }
        for (n, &c) in indecomposable.iter().enumerate().skip(1) {
            assert_eq!(enumerate_diagrams(n, true).count(), c, "n={n}");
        }
    }

    #[test]
    fn enumeration_distinct_and_valid() {
        let all: Vec<ChordDiagram> = enumerate_diagrams(4, false).collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        assert_eq!(sorted, all, "lexicographic order");
        for d in &all {
            assert!(ChordDiagram::from_partners(&d.partners()).is_ok());
        }
    }

    #[test]
    fn isolated_chord_examples() {
        assert_eq!(isolated_chords(&chords(&[(1, 2)])), 1);
        assert_eq!(isolated_chords(&chords(&[(1, 3), (2, 4)])), 0);
        assert_eq!(isolated_chords(&chords(&[(1, 4), (2, 3)])), 1);
    }

    #[test]
    fn partner_of_one_small() {
        let values: Vec<u32> = enumerate_diagrams(2, true)
            .map(|d| partner_of_one(&d))
            .collect();
        assert_eq!(values, vec![3, 4]);
        // uniform on 2..=2n over all diagrams
        let mut h: BTreeMap<u32, usize> = BTreeMap::new();
        for d in enumerate_diagrams(4, false) {
            *h.entry(partner_of_one(&d)).or_default() += 1;
        }
        assert_eq!(
            h.keys().copied().collect::<Vec<_>>(),
            (2..=8).collect::<Vec<_>>()
        );
        assert!(h.values().all(|&c| c == 15));
    }

    #[test]
    fn samplers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        assert_eq!(sample_diagram(1, &mut rng), chords(&[(1, 2)]));
        let mut h: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for _ in 0..2000 {
            let (d, _) = sample_indecomposable(2, &mut rng);
            assert!(is_indecomposable(&d));
            *h.entry(d.partners()).or_default() += 1;
        }
        assert_eq!(h.len(), 2);
        assert!(h.values().all(|&c| (900..1100).contains(&c)), "{h:?}");
        for _ in 0..100 {
            let d = sample_diagram(7, &mut rng);
            assert!(ChordDiagram::from_partners(&d.partners()).is_ok());
        }
    }
}
