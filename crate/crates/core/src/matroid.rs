//! Brute-force model of the transversal matroid `M(W)`: a vertex set is
//! independent when its vertices can be matched to distinct propagators
//! supported on them.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::diagram::{cyclic_pos, sort_cyclic, Diagram};
use crate::error::{Error, Result};
use crate::necklace::GrassmannNecklace;

pub type Basis = BTreeSet<usize>;

/// Matching test: augmenting paths from each vertex of `set` into the
/// propagators supported on it.
pub fn is_independent(w: &Diagram, set: &BTreeSet<usize>) -> bool {
    matching_size(w, set) == set.len()
}

/// Size of a maximum matching between `set` and the propagators.
pub fn matching_size(w: &Diagram, set: &BTreeSet<usize>) -> usize {
    let n = w.n();
    let props = w.propagators();
    let adj: Vec<Vec<usize>> = set
        .iter()
        .map(|&v| {
            (0..props.len())
                .filter(|&pi| props[pi].is_supported_on(v, n))
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; props.len()];
    let mut size = 0;
    for left in 0..adj.len() {
        let mut seen = vec![false; props.len()];
        if augment(left, &adj, &mut owner, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(
    left: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &right in &adj[left] {
        if seen[right] {
            continue;
        }
        seen[right] = true;
        let free = match owner[right] {
            None => true,
            Some(other) => augment(other, adj, owner, seen),
        };
        if free {
            owner[right] = Some(left);
            return true;
        }
    }
    false
}

/// Hall-type test: no `U ⊆ set` with `|Prop(U)| < |U|`.
pub fn is_independent_hall(w: &Diagram, set: &BTreeSet<usize>) -> bool {
    let items: Vec<usize> = set.iter().copied().collect();
    assert!(items.len() < 32, "subset enumeration needs |set| < 32");
    (1u32..(1u32 << items.len())).all(|mask| {
        let u: BTreeSet<usize> = (0..items.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| items[i])
            .collect();
        w.props_on(&u).len() >= u.len()
    })
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Basis> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Basis>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for v in start..=n {
            if n - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Every basis, in lexicographic order.
pub fn bases(w: &Diagram) -> Vec<Basis> {
    k_subsets(w.n(), w.k())
        .into_iter()
        .filter(|s| is_independent(w, s))
        .collect()
}

/// Greedy scan in `<_i` order, keeping a vertex when the kept set stays
/// independent. By the exchange axiom this is the `<_i`-lex-minimal basis.
pub fn lexmin_basis(w: &Diagram, i: usize) -> Result<Basis> {
    w.check_vertex(i)?;
    let n = w.n();
    let mut order: Vec<usize> = (1..=n).collect();
    sort_cyclic(&mut order, i, n);
    let mut kept = BTreeSet::new();
    for v in order {
        if kept.len() == w.k() {
            break;
        }
        kept.insert(v);
        if !is_independent(w, &kept) {
            kept.remove(&v);
        }
    }
    Ok(kept)
}

/// Compare two equal-size sets lexicographically after sorting each by `<_i`.
pub fn cyclic_lex_cmp(a: &Basis, b: &Basis, i: usize, n: usize) -> Ordering {
    let key = |s: &Basis| {
        let mut v: Vec<usize> = s.iter().map(|&x| cyclic_pos(x, i, n)).collect();
        v.sort();
        v
    };
    key(a).cmp(&key(b))
}

/// Sort every basis by `<_i`-lex order and take the first. Test reference for
/// [`lexmin_basis`].
pub fn lexmin_basis_brute(w: &Diagram, i: usize) -> Result<Basis> {
    w.check_vertex(i)?;
    let n = w.n();
    let mut all = bases(w);
    all.sort_by(|a, b| cyclic_lex_cmp(a, b, i, n));
    all.into_iter()
        .next()
        .ok_or_else(|| Error::InvalidDiagram("matroid has no basis".into()))
}

/// Gale order `A ⪯_j B`: after sorting both by `<_j`, every `a_r <=_j b_r`.
///
/// This is the mirror image of the `⪰` notation sometimes used for the same
/// relation; necklace terms sit at the bottom, `I_j ⪯_j J` for every basis.
pub fn gale_leq(a: &Basis, b: &Basis, j: usize, n: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let mut av: Vec<usize> = a.iter().copied().collect();
    let mut bv: Vec<usize> = b.iter().copied().collect();
    sort_cyclic(&mut av, j, n);
    sort_cyclic(&mut bv, j, n);
    Ok(av
        .iter()
        .zip(&bv)
        .all(|(&x, &y)| cyclic_pos(x, j, n) <= cyclic_pos(y, j, n)))
}

/// Bases recovered from a necklace: `{ J : I_i ⪯_i J for all i }`.
pub fn bases_from_necklace(neck: &GrassmannNecklace) -> Vec<Basis> {
    let n = neck.n();
    k_subsets(n, neck.k())
        .into_iter()
        .filter(|cand| (1..=n).all(|i| gale_leq(neck.term(i), cand, i, n).expect("equal sizes")))
        .collect()
}
