//! Exhaustive and random generation of small diagrams.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{Diagram, Propagator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Filter {
    Admissible,
    WeaklyAdmissible,
}

/// Lexicographic stream of non-crossing `k`-subsets of edge pairs, filtered
/// by (weak) admissibility. Pairs of adjacent edges never qualify and are not
/// considered.
pub struct DiagramStream {
    n: usize,
    k: usize,
    filter: Filter,
    pairs: Vec<Propagator>,
    stack: Vec<usize>,
    started: bool,
    done: bool,
}

impl DiagramStream {
    fn new(k: usize, n: usize, filter: Filter) -> Self {
        let mut pairs = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let adjacent = b == a + 1 || (a == 1 && b == n);
                if !adjacent {
                    pairs.push(Propagator::new(a, b).expect("a < b"));
                }
            }
        }
        let done = filter == Filter::Admissible && n < k + 4;
        DiagramStream {
            n,
            k,
            filter,
            pairs,
            stack: Vec::with_capacity(k),
            started: false,
            done,
        }
    }

    fn compatible(&self, idx: usize) -> bool {
        let cand = &self.pairs[idx];
        self.stack.iter().all(|&s| !self.pairs[s].crosses(cand))
    }

    /// Advance to the next full non-crossing selection in lex order.
    fn advance(&mut self) -> bool {
        // Resume position: next index to try at the current depth.
        let mut next = if !self.started {
            self.started = true;
            0
        } else {
            match self.stack.pop() {
                Some(last) => last + 1,
                None => return false,
            }
        };
        loop {
            if self.stack.len() == self.k {
                return true;
            }
            let need = self.k - self.stack.len();
            let mut placed = false;
            while next + need <= self.pairs.len() {
                if self.compatible(next) {
                    self.stack.push(next);
                    next += 1;
                    placed = true;
                    break;
                }
                next += 1;
            }
            if !placed {
                match self.stack.pop() {
                    Some(last) => next = last + 1,
                    None => return false,
                }
            }
        }
    }

    fn current(&self) -> Diagram {
        let props = self.stack.iter().map(|&i| self.pairs[i]).collect();
        Diagram::new(self.n, props).expect("generated pairs are valid")
    }
}

impl Iterator for DiagramStream {
    type Item = Diagram;

    fn next(&mut self) -> Option<Diagram> {
        if self.done {
            return None;
        }
        loop {
            if !self.advance() {
                self.done = true;
                return None;
            }
            let d = self.current();
            let keep = match self.filter {
                Filter::Admissible => d.is_admissible(),
                Filter::WeaklyAdmissible => d.is_weakly_admissible(),
            };
            if self.k == 0 {
                // The empty selection is emitted once.
                self.done = true;
            }
            if keep {
                return Some(d);
            }
            if self.done {
                return None;
            }
        }
    }
}

/// Every admissible diagram with exactly `k` propagators on `n` vertices.
pub fn enumerate_admissible(k: usize, n: usize) -> DiagramStream {
    DiagramStream::new(k, n, Filter::Admissible)
}

/// Every weakly admissible diagram with exactly `k` propagators.
pub fn enumerate_weakly_admissible(k: usize, n: usize) -> DiagramStream {
    DiagramStream::new(k, n, Filter::WeaklyAdmissible)
}

/// All admissible diagrams with `min_n <= n <= max_n`, every `k`.
pub fn admissible_up_to(min_n: usize, max_n: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    for n in min_n.max(1)..=max_n {
        for k in 0..=n.saturating_sub(4) {
            out.extend(enumerate_admissible(k, n));
        }
    }
    out
}

/// Grow a random admissible diagram with `k` propagators by adding random
/// edge pairs that keep the diagram weakly admissible. Returns `None` if
/// `attempts` restarts all get stuck below `k`.
pub fn random_admissible<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    attempts: usize,
) -> Option<Diagram> {
    if n < k + 4 {
        return None;
    }
    let mut pairs: Vec<Propagator> = enumerate_weakly_admissible(1, n)
        .map(|d| d.propagators()[0])
        .collect();
    for _ in 0..attempts {
        pairs.shuffle(rng);
        let mut chosen: Vec<Propagator> = Vec::with_capacity(k);
        for &cand in &pairs {
            if chosen.len() == k {
                break;
            }
            if chosen.iter().any(|c| c.crosses(&cand)) {
                continue;
            }
            chosen.push(cand);
            let trial = Diagram::new(n, chosen.clone()).expect("distinct pairs");
            if !trial.is_weakly_admissible() {
                chosen.pop();
            }
        }
        if chosen.len() == k {
            let d = Diagram::new(n, chosen).expect("distinct pairs");
            debug_assert!(d.is_admissible());
            return Some(d);
        }
    }
    None
}

/// `count` random admissible diagrams with `min_n <= n <= max_n` and
/// `1 <= k <= n - 4`, reproducible from `seed`.
pub fn random_corpus(seed: u64, count: usize, min_n: usize, max_n: usize) -> Vec<Diagram> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(min_n..=max_n);
        if n < 5 {
            continue;
        }
        let k = rng.gen_range(1..=n - 4);
        if let Some(d) = random_admissible(&mut rng, n, k, 200) {
            out.push(d);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    /// Independent filter: every subset of all C(n,2) pairs, checked against
    /// the three conditions written out directly.
    fn brute_force(k: usize, n: usize) -> BTreeSet<Vec<(usize, usize)>> {
        let mut all = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                all.push((a, b));
            }
        }
        let support = |(a, b): (usize, usize)| -> BTreeSet<usize> {
            [a, a % n + 1, b, b % n + 1].into_iter().collect()
        };
        let mut out = BTreeSet::new();
        for mask in 0u64..(1u64 << all.len()) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let chosen: Vec<(usize, usize)> = (0..all.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            if n < k + 4 {
                continue;
            }
            let crossing = chosen
                .iter()
                .any(|&(i, j)| chosen.iter().any(|&(kk, l)| i < kk && kk < j && j < l));
            if crossing {
                continue;
            }
            let dense = (1u32..(1 << k)).any(|sub| {
                let mut union = BTreeSet::new();
                let mut size = 0;
                for (idx, &pr) in chosen.iter().enumerate() {
                    if sub >> idx & 1 == 1 {
                        union.extend(support(pr));
                        size += 1;
                    }
                }
                union.len() < size + 3
            });
            if !dense {
                out.insert(chosen);
            }
        }
        out
    }

    fn as_pairs(d: &Diagram) -> Vec<(usize, usize)> {
        d.sorted_props().iter().map(|p| p.ends()).collect()
    }

    #[test]
    fn empty_diagram_is_emitted_once() {
        for n in 4..9 {
            let all: Vec<Diagram> = enumerate_admissible(0, n).collect();
            assert_eq!(all, vec![Diagram::empty(n)]);
        }
    }

    #[test]
    fn single_propagators_on_six_vertices() {
        assert_eq!(enumerate_admissible(1, 6).count(), 9);
    }

    #[test]
    fn two_propagators_on_six_vertices() {
        // Frozen from the brute-force filter below.
        assert_eq!(brute_force(2, 6).len(), 21);
        assert_eq!(enumerate_admissible(2, 6).count(), 21);
    }

    #[test]
    fn matches_brute_force_up_to_seven() {
        for n in 4..=7 {
            for k in 0..=3 {
                let got: Vec<Vec<(usize, usize)>> =
                    enumerate_admissible(k, n).map(|d| as_pairs(&d)).collect();
                let unique: BTreeSet<_> = got.iter().cloned().collect();
                assert_eq!(unique.len(), got.len(), "duplicates at k={k} n={n}");
                assert_eq!(unique, brute_force(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn output_is_lexicographic() {
        let got: Vec<Vec<(usize, usize)>> =
            enumerate_admissible(2, 8).map(|d| as_pairs(&d)).collect();
        let mut sorted = got.clone();
        sorted.sort();
        assert_eq!(got, sorted);
    }

    #[test]
    fn random_diagrams_are_admissible() {
        let corpus = random_corpus(7, 50, 9, 12);
        assert_eq!(corpus.len(), 50);
        assert!(corpus.iter().all(|d| d.is_admissible() && d.k() >= 1));
        assert_eq!(corpus, random_corpus(7, 50, 9, 12));
    }
}
