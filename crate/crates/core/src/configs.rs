//! Small propagator configurations that every weakly admissible diagram with
//! no non-supporting vertices must contain.

use serde::Serialize;

use crate::diagram::{
    cyclic_pos, propagator_length, wrap, Diagram, DirectedPropagator, Propagator,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "config", rename_all = "snake_case")]
pub enum SmallConfig {
    /// A propagator with at most six vertices on one side, where that side
    /// holds exactly one other propagator, of length 2.
    LongAndShort { long: Propagator, short: Propagator },
    /// Length-2 propagators `(i, i+2)` and `(j, j+2)` with
    /// `j - i in {2, 3, 4}` and no other propagator ending on edges `i+2..=j`.
    PairOfShorts {
        first: Propagator,
        second: Propagator,
    },
}

/// Directed start `i` such that `p = (i, i + 2)` cyclically, if any.
fn short_start(p: &Propagator, n: usize) -> Option<usize> {
    let (a, b) = p.ends();
    if cyclic_pos(b, a, n) == 2 {
        Some(a)
    } else if cyclic_pos(a, b, n) == 2 {
        Some(b)
    } else {
        None
    }
}

pub fn is_long_and_short(w: &Diagram, long: &Propagator, short: &Propagator) -> bool {
    let n = w.n();
    if long == short || !w.contains(long) || !w.contains(short) {
        return false;
    }
    if propagator_length(short, n) != 2 {
        return false;
    }
    let (a, b) = long.ends();
    [a, b].into_iter().any(|start| {
        let dp = DirectedPropagator::new(*long, start).expect("start is an end");
        if w.side_size(&dp) > 6 {
            return false;
        }
        let mut inside = w.props_inside(&dp).expect("long is in the diagram");
        inside.sort();
        let mut expected = vec![*long, *short];
        expected.sort();
        inside == expected
    })
}

pub fn is_pair_of_shorts(w: &Diagram, first: &Propagator, second: &Propagator) -> bool {
    let n = w.n();
    if first == second || !w.contains(first) || !w.contains(second) {
        return false;
    }
    let (Some(i), Some(j)) = (short_start(first, n), short_start(second, n)) else {
        return false;
    };
    let gap = cyclic_pos(j, i, n);
    if !(2..=4).contains(&gap) {
        return false;
    }
    // Edges i+2 ..= j.
    let blocked: Vec<usize> = (2..=gap).map(|off| wrap((i + off) as i64, n)).collect();
    w.propagators()
        .iter()
        .filter(|p| *p != first && *p != second)
        .all(|p| blocked.iter().all(|&e| !p.has_end(e)))
}

/// Scan all ordered pairs for either configuration. Returns `None` when no
/// pair qualifies, which cannot happen for weakly admissible diagrams on at
/// least five vertices with every vertex supporting a propagator.
pub fn find_small_config(w: &Diagram) -> Option<SmallConfig> {
    let props = w.sorted_props();
    for p in &props {
        for q in &props {
            if is_pair_of_shorts(w, p, q) {
                return Some(SmallConfig::PairOfShorts {
                    first: *p,
                    second: *q,
                });
            }
        }
    }
    for p in &props {
        for q in &props {
            if is_long_and_short(w, p, q) {
                return Some(SmallConfig::LongAndShort {
                    long: *p,
                    short: *q,
                });
            }
        }
    }
    None
}

/// Re-check a configuration against the diagram.
pub fn validates(w: &Diagram, config: &SmallConfig) -> bool {
    match config {
        SmallConfig::LongAndShort { long, short } => is_long_and_short(w, long, short),
        SmallConfig::PairOfShorts { first, second } => is_pair_of_shorts(w, first, second),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: usize, b: usize) -> Propagator {
        Propagator::new(a, b).unwrap()
    }

    #[test]
    fn adjacent_shorts_form_a_pair() {
        let w = Diagram::from_pairs(6, &[[1, 3], [3, 5]]).unwrap();
        assert_eq!(
            find_small_config(&w),
            Some(SmallConfig::PairOfShorts {
                first: p(1, 3),
                second: p(3, 5)
            })
        );
    }

    #[test]
    fn nested_short_inside_long() {
        let w = Diagram::from_pairs(8, &[[1, 3], [4, 8], [5, 7]]).unwrap();
        let found = find_small_config(&w).expect("configuration exists");
        assert!(validates(&w, &found));

        // Exhaustive scan of both predicates over all pairs.
        let props = w.sorted_props();
        let mut any = false;
        for a in &props {
            for b in &props {
                any |= is_pair_of_shorts(&w, a, b) || is_long_and_short(&w, a, b);
            }
        }
        assert!(any);
        assert!(is_long_and_short(&w, &p(4, 8), &p(5, 7)));
    }

    #[test]
    fn wrapping_short_is_recognised() {
        // (7,1) on 8 vertices is (7, 7+2) read cyclically.
        assert_eq!(short_start(&p(1, 7), 8), Some(7));
        assert_eq!(short_start(&p(1, 4), 8), None);
    }

    #[test]
    fn lone_propagator_has_no_configuration() {
        let w = Diagram::from_pairs(8, &[[1, 4]]).unwrap();
        assert!(!w.non_supporting_vertices().is_empty());
        assert_eq!(find_small_config(&w), None);
    }

    #[test]
    fn other_ends_in_the_gap_break_the_pair() {
        // (1,3) and (4,6) with (4,8) also ending on edge 4.
        let w = Diagram::from_pairs(9, &[[1, 3], [4, 6], [4, 8]]).unwrap();
        assert!(!is_pair_of_shorts(&w, &p(1, 3), &p(4, 6)));
        let w = Diagram::from_pairs(9, &[[1, 3], [4, 6]]).unwrap();
        assert!(is_pair_of_shorts(&w, &p(1, 3), &p(4, 6)));
    }
}
