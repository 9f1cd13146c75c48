//! Grassmann necklaces read directly off a Wilson loop diagram.
//!
//! For each starting vertex `i` the walk visits `i, i+1, ...` and, at every
//! vertex that still supports a propagator, removes the clockwise-most one and
//! records the vertex. The recorded vertices form `I_i`; the walk also records
//! which propagator contributed which vertex, `I_i(p)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::diagram::{cyclic_pos, sort_cyclic, wrap, Diagram, Propagator};
use crate::error::{Error, Result};

/// Order propagators supported on `j` from most clockwise to least.
///
/// Ends on edge `j - 1` come before ends on edge `j`. Among propagators ending
/// on the same edge `e`, the one whose other end is met first when walking
/// `e - 1, e - 2, ...` comes first.
pub fn clockwise_order_at_vertex(
    w: &Diagram,
    j: usize,
    candidates: &[Propagator],
) -> Result<Vec<Propagator>> {
    w.check_vertex(j)?;
    let n = w.n();
    let before = w.prev(j);
    let mut keyed = Vec::with_capacity(candidates.len());
    for p in candidates {
        if !w.contains(p) {
            return Err(Error::UnknownPropagator(*p));
        }
        let key = if p.has_end(before) && p.has_end(j) {
            // Joins edges j-1 and j; such a propagator violates the density bound.
            return Err(Error::NotWeaklyAdmissible(format!(
                "{p} joins adjacent edges"
            )));
        } else if let Some(other) = p.other_end(before) {
            (0, cyclic_pos(before, other, n))
        } else if let Some(other) = p.other_end(j) {
            (1, cyclic_pos(j, other, n))
        } else {
            return Err(Error::NotSupported {
                prop: *p,
                vertex: j,
            });
        };
        keyed.push((key, *p));
    }
    keyed.sort();
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

/// A non-empty cyclic interval `[lo, hi]` of vertices, possibly wrapping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicInterval {
    pub lo: usize,
    pub hi: usize,
    #[serde(skip)]
    n: usize,
}

impl CyclicInterval {
    pub fn new(lo: usize, hi: usize, n: usize) -> Self {
        CyclicInterval { lo, hi, n }
    }

    pub fn len(&self) -> usize {
        cyclic_pos(self.hi, self.lo, self.n) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        cyclic_pos(v, self.lo, self.n) <= cyclic_pos(self.hi, self.lo, self.n)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).map(move |off| wrap((self.lo + off) as i64, self.n))
    }

    /// Smallest interval covering `set`, if `set` is a single cyclic run.
    pub fn from_set(set: &BTreeSet<usize>, n: usize) -> Option<Self> {
        if set.is_empty() {
            return None;
        }
        if set.len() == n {
            return Some(CyclicInterval::new(1, n, n));
        }
        let prev = |v: usize| wrap(v as i64 - 1, n);
        let starts: Vec<usize> = set
            .iter()
            .copied()
            .filter(|&v| !set.contains(&prev(v)))
            .collect();
        if starts.len() != 1 {
            return None;
        }
        let lo = starts[0];
        Some(CyclicInterval::new(
            lo,
            wrap((lo + set.len() - 1) as i64, n),
            n,
        ))
    }
}

/// One necklace: `n` terms `I_1..I_n`, each a `k`-subset of `[n]`, plus the
/// propagator-to-vertex maps when the necklace came from a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannNecklace {
    n: usize,
    k: usize,
    terms: Vec<BTreeSet<usize>>,
    /// Per starting vertex, `(p, I_i(p))` in contribution order.
    assignments: Option<Vec<Vec<(Propagator, usize)>>>,
}

impl GrassmannNecklace {
    /// Validate raw terms (index 0 holds `I_1`).
    pub fn from_terms(n: usize, terms: Vec<BTreeSet<usize>>) -> Result<Self> {
        if terms.len() != n {
            return Err(Error::SizeMismatch(terms.len(), n));
        }
        if !is_grassmann_necklace(n, &terms)? {
            let index = first_violation(n, &terms).unwrap_or(1);
            return Err(Error::NotANecklace { index });
        }
        let k = terms.first().map_or(0, |t| t.len());
        Ok(GrassmannNecklace {
            n,
            k,
            terms,
            assignments: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[BTreeSet<usize>] {
        &self.terms
    }

    /// `I_i` for `1 <= i <= n`; indices wrap.
    pub fn term(&self, i: usize) -> &BTreeSet<usize> {
        &self.terms[wrap(i as i64, self.n) - 1]
    }

    /// `I_i` listed in `<_i` order.
    pub fn term_cyclic(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.term(i).iter().copied().collect();
        sort_cyclic(&mut v, wrap(i as i64, self.n), self.n);
        v
    }

    pub fn has_assignments(&self) -> bool {
        self.assignments.is_some()
    }

    /// `(p, I_i(p))` in the order the walk from `i` assigned them.
    pub fn contributions(&self, i: usize) -> Option<&[(Propagator, usize)]> {
        let idx = wrap(i as i64, self.n) - 1;
        self.assignments.as_ref().map(|a| a[idx].as_slice())
    }

    /// `I_i(p)`.
    pub fn assignment(&self, i: usize, p: &Propagator) -> Option<usize> {
        self.contributions(i)?
            .iter()
            .find(|(q, _)| q == p)
            .map(|&(_, v)| v)
    }

    /// `J_p(v) = { m : I_m(p) = v }` for each vertex `v` that `p` ever
    /// contributes. Errors if some `J_p(v)` is not a cyclic interval.
    pub fn contribution_intervals(
        &self,
        p: &Propagator,
    ) -> Result<BTreeMap<usize, CyclicInterval>> {
        let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for m in 1..=self.n {
            let v = self.assignment(m, p).ok_or(Error::UnknownPropagator(*p))?;
            groups.entry(v).or_default().insert(m);
        }
        groups
            .into_iter()
            .map(|(v, set)| {
                CyclicInterval::from_set(&set, self.n)
                    .map(|iv| (v, iv))
                    .ok_or_else(|| Error::NotAnInterval(format!("{set:?} for vertex {v} of {p}")))
            })
            .collect()
    }

    /// Vertices in no term.
    pub fn loops(&self) -> BTreeSet<usize> {
        (1..=self.n)
            .filter(|v| self.terms.iter().all(|t| !t.contains(v)))
            .collect()
    }

    /// Vertices in every term.
    pub fn coloops(&self) -> BTreeSet<usize> {
        (1..=self.n)
            .filter(|v| self.terms.iter().all(|t| t.contains(v)))
            .collect()
    }

    /// `pi(i) = j` where `I_{i+1} = (I_i \ {i}) ∪ {j}`, and `pi(i) = i` when
    /// `i` is not in `I_i`. Index 0 holds `pi(1)`. Decorations on fixed points
    /// are not tracked.
    pub fn decorated_permutation(&self) -> Result<Vec<usize>> {
        let n = self.n;
        let mut pi = Vec::with_capacity(n);
        for i in 1..=n {
            let cur = self.term(i);
            let next = self.term(i + 1);
            if !cur.contains(&i) {
                if cur != next {
                    return Err(Error::NotANecklace { index: i });
                }
                pi.push(i);
                continue;
            }
            let mut rest = cur.clone();
            rest.remove(&i);
            let added: Vec<usize> = next.difference(&rest).copied().collect();
            if added.len() != 1 || !rest.is_subset(next) {
                return Err(Error::NotANecklace { index: i });
            }
            pi.push(added[0]);
        }
        let distinct: BTreeSet<usize> = pi.iter().copied().collect();
        if distinct.len() != n {
            return Err(Error::NotANecklace { index: 1 });
        }
        Ok(pi)
    }

    pub fn to_json(&self) -> NecklaceJson {
        NecklaceJson {
            k: self.k,
            n: self.n,
            terms: (1..=self.n).map(|i| self.term_cyclic(i)).collect(),
            assignments: self.assignments.as_ref().map(|all| {
                all.iter()
                    .map(|row| {
                        row.iter()
                            .map(|&(prop, vertex)| AssignmentJson { prop, vertex })
                            .collect()
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub prop: Propagator,
    pub vertex: usize,
}

/// `{"k":…, "n":…, "terms":[[…],…], "assignments":[[{"prop":[a,b],"vertex":v},…],…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecklaceJson {
    pub k: usize,
    pub n: usize,
    pub terms: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignments: Option<Vec<Vec<AssignmentJson>>>,
}

impl TryFrom<NecklaceJson> for GrassmannNecklace {
    type Error = Error;

    fn try_from(value: NecklaceJson) -> Result<Self> {
        let terms = value
            .terms
            .into_iter()
            .map(|t| t.into_iter().collect())
            .collect();
        let mut neck = GrassmannNecklace::from_terms(value.n, terms)?;
        if neck.k != value.k {
            return Err(Error::SizeMismatch(value.k, neck.k));
        }
        neck.assignments = value.assignments.map(|all| {
            all.into_iter()
                .map(|row| row.into_iter().map(|a| (a.prop, a.vertex)).collect())
                .collect()
        });
        Ok(neck)
    }
}

/// Run the walk from every starting vertex.
///
/// Requires a weakly admissible diagram; each walk is capped at one full turn
/// and reports the leftover propagators if it fails to place them all.
pub fn grassmann_necklace(w: &Diagram) -> Result<GrassmannNecklace> {
    w.require_weakly_admissible()?;
    let n = w.n();
    let mut terms = Vec::with_capacity(n);
    let mut assignments = Vec::with_capacity(n);
    for start in 1..=n {
        let (term, assigned) = walk(w, start)?;
        terms.push(term);
        assignments.push(assigned);
    }
    Ok(GrassmannNecklace {
        n,
        k: w.k(),
        terms,
        assignments: Some(assignments),
    })
}

/// A necklace term and the vertex each propagator contributes to it.
type Walk = (BTreeSet<usize>, Vec<(Propagator, usize)>);

fn walk(w: &Diagram, start: usize) -> Result<Walk> {
    let n = w.n();
    let mut remaining: Vec<Propagator> = w.propagators().to_vec();
    let mut term = BTreeSet::new();
    let mut assigned = Vec::with_capacity(remaining.len());
    for step in 0..n {
        if remaining.is_empty() {
            break;
        }
        let j = wrap((start + step) as i64, n);
        let here: Vec<Propagator> = remaining
            .iter()
            .filter(|p| p.is_supported_on(j, n))
            .copied()
            .collect();
        if here.is_empty() {
            continue;
        }
        let chosen = clockwise_order_at_vertex(w, j, &here)?[0];
        remaining.retain(|p| *p != chosen);
        term.insert(j);
        assigned.push((chosen, j));
    }
    if !remaining.is_empty() {
        return Err(Error::WalkDidNotTerminate {
            start,
            remaining: remaining.len(),
        });
    }
    Ok((term, assigned))
}

/// Cyclic necklace condition. Errors if the terms differ in size.
pub fn is_grassmann_necklace(n: usize, terms: &[BTreeSet<usize>]) -> Result<bool> {
    if terms.len() != n {
        return Err(Error::SizeMismatch(terms.len(), n));
    }
    if let Some(first) = terms.first() {
        if terms.iter().any(|t| t.len() != first.len()) {
            return Err(Error::RaggedNecklace);
        }
    }
    if terms.iter().flatten().any(|&v| v == 0 || v > n) {
        return Ok(false);
    }
    Ok(first_violation(n, terms).is_none())
}

fn first_violation(n: usize, terms: &[BTreeSet<usize>]) -> Option<usize> {
    (1..=n).find(|&i| {
        let cur = &terms[i - 1];
        let next = &terms[i % n];
        if cur.contains(&i) {
            let mut rest = cur.clone();
            rest.remove(&i);
            !(rest.is_subset(next) && next.len() == cur.len())
        } else {
            cur != next
        }
    })
}

pub fn loops(neck: &GrassmannNecklace) -> BTreeSet<usize> {
    neck.loops()
}

pub fn coloops(neck: &GrassmannNecklace) -> BTreeSet<usize> {
    neck.coloops()
}

pub fn decorated_permutation(neck: &GrassmannNecklace) -> Result<Vec<usize>> {
    neck.decorated_permutation()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: usize, b: usize) -> Propagator {
        Propagator::new(a, b).unwrap()
    }

    fn eight_vertex() -> Diagram {
        Diagram::from_pairs(8, &[[1, 4], [2, 4], [5, 7], [5, 8]]).unwrap()
    }

    /// p = (1,6), q = (1,5), s = (1,4).
    fn seven_vertex() -> Diagram {
        Diagram::from_pairs(7, &[[1, 6], [1, 5], [1, 4]]).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn terms(rows: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        rows.iter().map(|t| set(t)).collect()
    }

    #[test]
    fn clockwise_order_examples() {
        let w = eight_vertex();
        assert_eq!(
            clockwise_order_at_vertex(&w, 1, &[p(1, 4), p(5, 8)]).unwrap(),
            vec![p(5, 8), p(1, 4)]
        );
        assert_eq!(
            clockwise_order_at_vertex(&w, 5, &[p(1, 4), p(2, 4)]).unwrap(),
            vec![p(2, 4), p(1, 4)]
        );
        assert_eq!(
            clockwise_order_at_vertex(&seven_vertex(), 1, &[p(1, 4), p(1, 5), p(1, 6)]).unwrap(),
            vec![p(1, 6), p(1, 5), p(1, 4)]
        );
        assert_eq!(
            clockwise_order_at_vertex(&w, 3, &[p(5, 7)]),
            Err(Error::NotSupported {
                prop: p(5, 7),
                vertex: 3
            })
        );
    }

    #[test]
    fn necklace_of_eight_vertex_example() {
        let neck = grassmann_necklace(&eight_vertex()).unwrap();
        let expected = [
            vec![1, 2, 3, 5],
            vec![2, 3, 5, 6],
            vec![3, 4, 5, 6],
            vec![4, 5, 6, 7],
            vec![5, 6, 7, 1],
            vec![6, 7, 1, 2],
            vec![7, 8, 1, 2],
            vec![8, 1, 2, 3],
        ];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(&neck.term_cyclic(i + 1), e);
        }
        // r = (5,8), q = (1,4), p = (2,4), s = (5,7).
        assert_eq!(
            neck.contributions(1).unwrap(),
            &[(p(5, 8), 1), (p(1, 4), 2), (p(2, 4), 3), (p(5, 7), 5)]
        );
        assert_eq!(neck.assignment(5, &p(2, 4)), Some(5));
    }

    #[test]
    fn necklace_of_seven_vertex_example() {
        let neck = grassmann_necklace(&seven_vertex()).unwrap();
        let expected = terms(&[
            &[1, 2, 4],
            &[2, 4, 5],
            &[4, 5, 6],
            &[4, 5, 6],
            &[5, 6, 7],
            &[6, 7, 1],
            &[7, 1, 2],
        ]);
        assert_eq!(neck.terms(), expected.as_slice());
        // The arrows, not the caption, fix I_7: p -> 7, q -> 1, s -> 2.
        assert_eq!(neck.assignment(7, &p(1, 6)), Some(7));
        assert_eq!(neck.assignment(7, &p(1, 5)), Some(1));
        assert_eq!(neck.assignment(7, &p(1, 4)), Some(2));
        assert_eq!(neck.assignment(3, &p(1, 4)), Some(4));
        assert_eq!(neck.assignment(3, &p(1, 5)), Some(5));
        assert_eq!(neck.assignment(3, &p(1, 6)), Some(6));
        assert_eq!(neck.assignment(6, &p(1, 4)), Some(1));
    }

    #[test]
    fn empty_diagram_has_empty_terms() {
        let neck = grassmann_necklace(&Diagram::empty(5)).unwrap();
        assert!(neck.terms().iter().all(|t| t.is_empty()));
        assert_eq!(neck.decorated_permutation().unwrap(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn rejects_crossing_diagram() {
        let w = Diagram::from_pairs(8, &[[1, 3], [2, 4]]).unwrap();
        assert!(matches!(
            grassmann_necklace(&w),
            Err(Error::NotWeaklyAdmissible(_))
        ));
    }

    #[test]
    fn necklace_condition_examples() {
        let neck = grassmann_necklace(&eight_vertex()).unwrap();
        assert!(is_grassmann_necklace(8, neck.terms()).unwrap());
        assert!(is_grassmann_necklace(4, &terms(&[&[1, 2], &[1, 2], &[1, 2], &[1, 2]])).unwrap());
        assert!(!is_grassmann_necklace(4, &terms(&[&[1, 2], &[3, 4], &[1, 2], &[3, 4]])).unwrap());
        assert_eq!(
            is_grassmann_necklace(3, &terms(&[&[1], &[1, 2], &[1]])),
            Err(Error::RaggedNecklace)
        );
    }

    #[test]
    fn single_propagator_intervals() {
        let w = Diagram::from_pairs(8, &[[1, 4]]).unwrap();
        let neck = grassmann_necklace(&w).unwrap();
        let iv = neck.contribution_intervals(&p(1, 4)).unwrap();
        let as_sets: BTreeMap<usize, Vec<usize>> =
            iv.iter().map(|(&v, i)| (v, i.iter().collect())).collect();
        let expected: BTreeMap<usize, Vec<usize>> = [
            (1, vec![6, 7, 8, 1]),
            (2, vec![2]),
            (4, vec![3, 4]),
            (5, vec![5]),
        ]
        .into_iter()
        .collect();
        assert_eq!(as_sets, expected);
    }

    #[test]
    fn eight_vertex_intervals_partition() {
        let w = eight_vertex();
        let neck = grassmann_necklace(&w).unwrap();
        let prop = p(5, 7);
        // Inverting the assignment maps directly.
        let mut direct: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for m in 1..=8 {
            direct
                .entry(neck.assignment(m, &prop).unwrap())
                .or_default()
                .insert(m);
        }
        let iv = neck.contribution_intervals(&prop).unwrap();
        assert_eq!(iv.len(), 4);
        for (v, i) in &iv {
            assert_eq!(&i.iter().collect::<BTreeSet<_>>(), &direct[v]);
        }
        let total: usize = iv.values().map(|i| i.len()).sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn loops_and_coloops() {
        let neck = grassmann_necklace(&eight_vertex()).unwrap();
        assert!(neck.loops().is_empty());
        assert!(neck.coloops().is_empty());

        let w = Diagram::from_pairs(8, &[[1, 4]]).unwrap();
        let neck = grassmann_necklace(&w).unwrap();
        assert_eq!(neck.loops(), set(&[3, 6, 7, 8]));
        assert_eq!(neck.loops(), w.non_supporting_vertices());
        assert!(neck.coloops().is_empty());
    }

    #[test]
    fn decorated_permutation_of_eight_vertex_example() {
        let neck = grassmann_necklace(&eight_vertex()).unwrap();
        // Differencing consecutive printed terms.
        assert_eq!(
            neck.decorated_permutation().unwrap(),
            vec![6, 4, 7, 1, 2, 8, 3, 5]
        );
    }

    #[test]
    fn decorated_permutation_rejects_non_necklace() {
        let bogus = GrassmannNecklace {
            n: 4,
            k: 2,
            terms: terms(&[&[1, 2], &[3, 4], &[1, 2], &[3, 4]]),
            assignments: None,
        };
        assert!(bogus.decorated_permutation().is_err());
        assert!(GrassmannNecklace::from_terms(4, bogus.terms.clone()).is_err());
    }

    #[test]
    fn json_lists_terms_cyclically() {
        let neck = grassmann_necklace(&eight_vertex()).unwrap();
        let json = neck.to_json();
        assert_eq!(json.terms[4], vec![5, 6, 7, 1]);
        let text = serde_json::to_string(&json).unwrap();
        let back: NecklaceJson = serde_json::from_str(&text).unwrap();
        let again = GrassmannNecklace::try_from(back).unwrap();
        assert_eq!(again, neck);
    }

    #[test]
    fn interval_from_set() {
        assert_eq!(
            CyclicInterval::from_set(&set(&[7, 8, 1]), 8),
            Some(CyclicInterval::new(7, 1, 8))
        );
        assert_eq!(CyclicInterval::from_set(&set(&[1, 3]), 8), None);
        assert!(CyclicInterval::new(7, 1, 8).contains(8));
        assert!(!CyclicInterval::new(7, 1, 8).contains(2));
    }
}
