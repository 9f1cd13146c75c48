//! Wilson loop diagrams: a cycle on `n` vertices with non-crossing chords
//! ("propagators") joining pairs of boundary edges.
//!
//! Vertices and edges are both labelled `1..=n`; edge `e` joins vertex `e` to
//! vertex `e + 1` (with `n + 1 = 1`). Every cyclic reduction lands in `1..=n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduce `x` into the cyclic range `1..=n`.
pub fn wrap(x: i64, n: usize) -> usize {
    ((x - 1).rem_euclid(n as i64) + 1) as usize
}

/// Offset of `x` from `start` going counterclockwise, in `0..n`.
///
/// This is the rank of `x` in the total order `<_start`.
pub fn cyclic_pos(x: usize, start: usize, n: usize) -> usize {
    (x + n - start) % n
}

/// `a <=_start b` in the cyclic order beginning at `start`.
pub fn cyclic_le(a: usize, b: usize, start: usize, n: usize) -> bool {
    cyclic_pos(a, start, n) <= cyclic_pos(b, start, n)
}

/// Sort labels by `<_start`.
pub fn sort_cyclic(items: &mut [usize], start: usize, n: usize) {
    items.sort_by_key(|&x| cyclic_pos(x, start, n));
}

/// An unordered pair of distinct edges, stored with the smaller label first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Propagator {
    lo: usize,
    hi: usize,
}

impl Propagator {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidDiagram(format!(
                "propagator ({a},{b}) joins an edge to itself"
            )));
        }
        if a == 0 || b == 0 {
            return Err(Error::InvalidDiagram("edge labels are 1-based".into()));
        }
        Ok(Propagator {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn ends(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn has_end(&self, edge: usize) -> bool {
        self.lo == edge || self.hi == edge
    }

    /// The end that is not `edge`; `None` if `edge` is not an end.
    pub fn other_end(&self, edge: usize) -> Option<usize> {
        if edge == self.lo {
            Some(self.hi)
        } else if edge == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    /// The vertices `{i, i+1, j, j+1}` in a diagram with `n` vertices.
    pub fn support(&self, n: usize) -> BTreeSet<usize> {
        [self.lo, self.lo + 1, self.hi, self.hi + 1]
            .into_iter()
            .map(|v| wrap(v as i64, n))
            .collect()
    }

    pub fn is_supported_on(&self, v: usize, n: usize) -> bool {
        let next = |e: usize| wrap(e as i64 + 1, n);
        v == self.lo || v == next(self.lo) || v == self.hi || v == next(self.hi)
    }

    /// Two propagators cross when their ends strictly interleave.
    pub fn crosses(&self, other: &Propagator) -> bool {
        let (i, j) = self.ends();
        let (k, l) = other.ends();
        (i < k && k < j && j < l) || (k < i && i < l && l < j)
    }
}

impl TryFrom<[usize; 2]> for Propagator {
    type Error = Error;

    fn try_from(value: [usize; 2]) -> Result<Self> {
        Propagator::new(value[0], value[1])
    }
}

impl From<Propagator> for [usize; 2] {
    fn from(p: Propagator) -> Self {
        [p.lo, p.hi]
    }
}

impl fmt::Display for Propagator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// A propagator read as running from edge `start` to its other end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DirectedPropagator {
    prop: Propagator,
    start: usize,
}

impl DirectedPropagator {
    pub fn new(prop: Propagator, start: usize) -> Result<Self> {
        if !prop.has_end(start) {
            return Err(Error::InvalidDiagram(format!(
                "{prop} has no end on edge {start}"
            )));
        }
        Ok(DirectedPropagator { prop, start })
    }

    pub fn propagator(&self) -> Propagator {
        self.prop
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.prop.other_end(self.start).expect("start is an end")
    }

    pub fn reversed(&self) -> Self {
        DirectedPropagator {
            prop: self.prop,
            start: self.end(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `n < k + 4`.
    TooManyProps { n: usize, k: usize },
    /// A smallest propagator set `Q` with `|V(Q)| < |Q| + 3`.
    DenseSubset { witness: Vec<Propagator> },
    /// A pair of crossing propagators.
    Crossing { witness: [Propagator; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        AdmissibilityReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn is_weakly_ok(&self) -> bool {
        self.violations
            .iter()
            .all(|v| matches!(v, Violation::TooManyProps { .. }))
    }
}

/// A Wilson loop diagram on vertices `1..=n`.
///
/// Propagators keep their insertion order, which serves as the default row
/// order of the associated matrix. Equality ignores that order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct Diagram {
    n: usize,
    props: Vec<Propagator>,
}

/// Interchange form: `{"n": 8, "propagators": [[1,4],[2,4]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub n: usize,
    pub propagators: Vec<[usize; 2]>,
}

impl TryFrom<DiagramJson> for Diagram {
    type Error = Error;

    fn try_from(value: DiagramJson) -> Result<Self> {
        Diagram::from_pairs(value.n, &value.propagators)
    }
}

impl From<Diagram> for DiagramJson {
    fn from(d: Diagram) -> Self {
        DiagramJson {
            n: d.n,
            propagators: d.props.iter().map(|&p| p.into()).collect(),
        }
    }
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_props() == other.sorted_props()
    }
}

impl Eq for Diagram {}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{")?;
        for (idx, p) in self.props.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}},[{}])", self.n)
    }
}

impl Diagram {
    pub fn new(n: usize, props: Vec<Propagator>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDiagram(
                "a diagram needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for p in &props {
            if p.hi() > n {
                return Err(Error::InvalidDiagram(format!(
                    "propagator {p} uses an edge outside [1..{n}]"
                )));
            }
            if !seen.insert(*p) {
                return Err(Error::InvalidDiagram(format!("duplicate propagator {p}")));
            }
        }
        Ok(Diagram { n, props })
    }

    pub fn from_pairs(n: usize, pairs: &[[usize; 2]]) -> Result<Self> {
        let props = pairs
            .iter()
            .map(|&[a, b]| Propagator::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(n, props)
    }

    pub fn empty(n: usize) -> Self {
        Diagram {
            n,
            props: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of propagators.
    pub fn k(&self) -> usize {
        self.props.len()
    }

    pub fn propagators(&self) -> &[Propagator] {
        &self.props
    }

    pub fn sorted_props(&self) -> Vec<Propagator> {
        let mut v = self.props.clone();
        v.sort();
        v
    }

    /// Same diagram with propagators in sorted order.
    pub fn canonical(&self) -> Diagram {
        Diagram {
            n: self.n,
            props: self.sorted_props(),
        }
    }

    pub fn contains(&self, p: &Propagator) -> bool {
        self.props.contains(p)
    }

    pub fn index_of(&self, p: &Propagator) -> Option<usize> {
        self.props.iter().position(|q| q == p)
    }

    fn require(&self, p: &Propagator) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::UnknownPropagator(*p))
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn next(&self, v: usize) -> usize {
        wrap(v as i64 + 1, self.n)
    }

    pub fn prev(&self, v: usize) -> usize {
        wrap(v as i64 - 1, self.n)
    }

    /// `V(p)`.
    pub fn vertex_support(&self, p: &Propagator) -> Result<BTreeSet<usize>> {
        self.require(p)?;
        Ok(p.support(self.n))
    }

    /// `V(P)`, the union of the supports.
    pub fn support_of_set(&self, ps: &[Propagator]) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for p in ps {
            out.extend(self.vertex_support(p)?);
        }
        Ok(out)
    }

    /// `Prop(U)`: propagators whose support meets `vertices`, in diagram order.
    pub fn props_on(&self, vertices: &BTreeSet<usize>) -> Vec<Propagator> {
        self.props
            .iter()
            .filter(|p| vertices.iter().any(|&v| p.is_supported_on(v, self.n)))
            .copied()
            .collect()
    }

    pub fn props_at(&self, v: usize) -> Vec<Propagator> {
        self.props
            .iter()
            .filter(|p| p.is_supported_on(v, self.n))
            .copied()
            .collect()
    }

    pub fn is_supporting(&self, v: usize) -> bool {
        self.props.iter().any(|p| p.is_supported_on(v, self.n))
    }

    pub fn non_supporting_vertices(&self) -> BTreeSet<usize> {
        (1..=self.n).filter(|&v| !self.is_supporting(v)).collect()
    }

    /// Checks `n >= k + 4`, the density bound `|V(Q)| >= |Q| + 3` over every
    /// non-empty `Q`, and non-crossing. The density bound is checked over all
    /// subsets, smallest first, so the reported witness has minimal size.
    pub fn admissibility(&self) -> AdmissibilityReport {
        let mut violations = Vec::new();
        let k = self.k();
        if self.n < k + 4 {
            violations.push(Violation::TooManyProps { n: self.n, k });
        }
        if let Some(witness) = self.smallest_dense_subset() {
            violations.push(Violation::DenseSubset { witness });
        }
        if let Some(pair) = self.first_crossing() {
            violations.push(Violation::Crossing { witness: pair });
        }
        AdmissibilityReport::from_violations(violations)
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().ok
    }

    /// Density and non-crossing only; `n >= k + 4` is not required.
    pub fn is_weakly_admissible(&self) -> bool {
        self.first_crossing().is_none() && self.smallest_dense_subset().is_none()
    }

    pub fn require_admissible(&self) -> Result<()> {
        let report = self.admissibility();
        if report.ok {
            Ok(())
        } else {
            Err(Error::NotAdmissible(describe(&report.violations)))
        }
    }

    pub fn require_weakly_admissible(&self) -> Result<()> {
        let report = self.admissibility();
        if report.is_weakly_ok() {
            Ok(())
        } else {
            Err(Error::NotWeaklyAdmissible(describe(&report.violations)))
        }
    }

    fn first_crossing(&self) -> Option<[Propagator; 2]> {
        let sorted = self.sorted_props();
        for (a, p) in sorted.iter().enumerate() {
            for q in &sorted[a + 1..] {
                if p.crosses(q) {
                    return Some([*p, *q]);
                }
            }
        }
        None
    }

    fn smallest_dense_subset(&self) -> Option<Vec<Propagator>> {
        let k = self.k();
        assert!(k < 64, "density check enumerates subsets and needs k < 64");
        let supports: Vec<BTreeSet<usize>> = self.props.iter().map(|p| p.support(self.n)).collect();
        let mut best: Option<u64> = None;
        for mask in 1u64..(1u64 << k) {
            let size = mask.count_ones();
            if let Some(b) = best {
                if b.count_ones() <= size {
                    continue;
                }
            }
            let mut union = BTreeSet::new();
            for (idx, s) in supports.iter().enumerate() {
                if mask >> idx & 1 == 1 {
                    union.extend(s.iter().copied());
                }
            }
            if union.len() < size as usize + 3 {
                best = Some(mask);
            }
        }
        best.map(|mask| {
            let mut w: Vec<Propagator> = (0..k)
                .filter(|idx| mask >> idx & 1 == 1)
                .map(|idx| self.props[idx])
                .collect();
            w.sort();
            w
        })
    }

    /// `P_in(p, <_i)`: propagators `(k,l)` with `i <=_i k <_i l <=_i j`,
    /// including `p` itself. Returned in diagram order.
    pub fn props_inside(&self, dp: &DirectedPropagator) -> Result<Vec<Propagator>> {
        self.require(&dp.propagator())?;
        let (i, j) = (dp.start(), dp.end());
        let n = self.n;
        let within =
            |a: usize, b: usize| cyclic_pos(a, i, n) < cyclic_pos(b, i, n) && cyclic_le(b, j, i, n);
        Ok(self
            .props
            .iter()
            .filter(|q| {
                let (a, b) = q.ends();
                within(a, b) || within(b, a)
            })
            .copied()
            .collect())
    }

    /// `P_out(p, <_i)`, the complement of [`Diagram::props_inside`].
    pub fn props_outside(&self, dp: &DirectedPropagator) -> Result<Vec<Propagator>> {
        let inside = self.props_inside(dp)?;
        Ok(self
            .props
            .iter()
            .filter(|q| !inside.contains(q))
            .copied()
            .collect())
    }

    /// Number of vertices strictly on the `<_start` side of `dp`,
    /// i.e. `|[i+1, j]|`.
    pub fn side_size(&self, dp: &DirectedPropagator) -> usize {
        cyclic_pos(dp.end(), dp.start(), self.n)
    }

    /// `l(p) = min(|[i+1, j]|, |[j+1, i]|)`.
    pub fn propagator_length(&self, p: &Propagator) -> Result<usize> {
        self.require(p)?;
        Ok(propagator_length(p, self.n))
    }

    /// Rotate by `s`: vertex `v -> v + s`, edge `e -> e + s`.
    pub fn rotate(&self, s: i64) -> Diagram {
        let n = self.n;
        let props = self
            .props
            .iter()
            .map(|p| {
                let (a, b) = p.ends();
                Propagator::new(wrap(a as i64 + s, n), wrap(b as i64 + s, n))
                    .expect("rotation is a bijection on edges")
            })
            .collect();
        Diagram { n, props }
    }

    /// Reflect through `v -> c - v`. Edge `e` (vertices `e, e+1`) lands on the
    /// edge spanned by `c - e - 1` and `c - e`, so `e -> c - e - 1`.
    pub fn reflect(&self, c: i64) -> Diagram {
        let n = self.n;
        let props = self
            .props
            .iter()
            .map(|p| {
                let (a, b) = p.ends();
                Propagator::new(wrap(c - a as i64 - 1, n), wrap(c - b as i64 - 1, n))
                    .expect("reflection is a bijection on edges")
            })
            .collect();
        Diagram { n, props }
    }

    /// All `2n` images under rotations and reflections (with repeats when the
    /// diagram has symmetry).
    pub fn dihedral_orbit(&self) -> Vec<Diagram> {
        let n = self.n as i64;
        (0..n)
            .map(|s| self.rotate(s))
            .chain((0..n).map(|c| self.reflect(c)))
            .collect()
    }

    /// Delete a vertex that supports nothing. Edges `v - 1` and `v` merge, and
    /// labels above `v` drop by one.
    pub fn remove_nonsupporting_vertex(&self, v: usize) -> Result<Diagram> {
        self.check_vertex(v)?;
        if self.is_supporting(v) {
            return Err(Error::SupportingVertex(v));
        }
        if self.n == 1 {
            return Err(Error::InvalidDiagram(
                "cannot remove the only vertex".into(),
            ));
        }
        let relabel = |e: usize| if e > v { e - 1 } else { e };
        let props = self
            .props
            .iter()
            .map(|p| {
                let (a, b) = p.ends();
                Propagator::new(relabel(a), relabel(b))
            })
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(self.n - 1, props)
    }
}

pub(crate) fn propagator_length(p: &Propagator, n: usize) -> usize {
    let (i, j) = p.ends();
    let one = cyclic_pos(j, i, n);
    let other = cyclic_pos(i, j, n);
    one.min(other)
}

fn describe(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| match v {
            Violation::TooManyProps { n, k } => format!("n = {n} < k + 4 = {}", k + 4),
            Violation::DenseSubset { witness } => {
                let items: Vec<String> = witness.iter().map(|p| p.to_string()).collect();
                format!("|V(Q)| < |Q| + 3 for Q = {{{}}}", items.join(","))
            }
            Violation::Crossing { witness } => {
                format!("{} crosses {}", witness[0], witness[1])
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}
