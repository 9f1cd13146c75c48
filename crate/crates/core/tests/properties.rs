use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wld_core::denominator::{denominator_definition, verify_radical};
use wld_core::diagram::wrap;
use wld_core::enumerate::random_admissible;
use wld_core::le::{dimension, le_from_necklace};
use wld_core::matroid::{bases, is_independent, is_independent_hall};
use wld_core::necklace::{decorated_permutation, grassmann_necklace, is_grassmann_necklace};
use wld_core::sympoly::{c_matrix_default, Monomial, SparsePolynomial, Variable};
use wld_core::Diagram;

fn diagram(min_n: usize, max_n: usize) -> impl Strategy<Value = Diagram> {
    (min_n..=max_n, any::<u64>()).prop_filter_map("no diagram found", |(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=n - 4);
        random_admissible(&mut rng, n, k, 50)
    })
}

fn polynomial() -> impl Strategy<Value = SparsePolynomial> {
    let monomial = prop::collection::vec((1usize..=3, 1usize..=4), 0..4);
    prop::collection::vec((monomial, -4i64..=4), 1..5).prop_map(|terms| {
        let mut p = SparsePolynomial::zero();
        for (vars, c) in terms {
            let m = Monomial::from_vars(vars.into_iter().map(|(r, v)| Variable::new(r, v)));
            p.add_term(m, BigInt::from(c));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimension_is_dihedral_invariant(w in diagram(6, 11)) {
        let d = dimension(&w).unwrap();
        prop_assert_eq!(d, 3 * w.k());
        for image in w.dihedral_orbit() {
            prop_assert_eq!(dimension(&image).unwrap(), d);
        }
    }

    #[test]
    fn necklace_is_well_formed(w in diagram(5, 12)) {
        let neck = grassmann_necklace(&w).unwrap();
        prop_assert!(is_grassmann_necklace(w.n(), neck.terms()).unwrap());
        let pi = decorated_permutation(&neck).unwrap();
        let image: BTreeSet<usize> = pi.iter().copied().collect();
        prop_assert_eq!(image.len(), w.n());
        for i in 1..=w.n() {
            prop_assert!(!neck.term(i).contains(&wrap(i as i64 - 1, w.n())));
        }
        for p in w.propagators() {
            let total: usize = neck.contribution_intervals(p).unwrap().values().map(|iv| iv.len()).sum();
            prop_assert_eq!(total, w.n());
        }
    }

    #[test]
    fn removing_a_free_vertex_deletes_a_zero_column(w in diagram(7, 11)) {
        let le = le_from_necklace(&grassmann_necklace(&w).unwrap()).unwrap();
        for v in w.non_supporting_vertices() {
            let smaller = w.remove_nonsupporting_vertex(v).unwrap();
            let small = le_from_necklace(&grassmann_necklace(&smaller).unwrap()).unwrap();
            let lift = |u: usize| if u < v { u } else { u + 1 };
            let mut lifted: Vec<(usize, usize)> =
                small.plus_cells().into_iter().map(|(r, c)| (lift(r), lift(c))).collect();
            lifted.sort();
            let mut cells = le.plus_cells();
            cells.sort();
            prop_assert_eq!(lifted, cells);
        }
    }

    #[test]
    fn hall_matches_matching(w in diagram(5, 10), mask in any::<u16>()) {
        let set: BTreeSet<usize> = (1..=w.n()).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        prop_assert_eq!(is_independent(&w, &set), is_independent_hall(&w, &set));
    }

    #[test]
    fn bases_satisfy_exchange(w in diagram(5, 8)) {
        let all = bases(&w);
        let lookup: BTreeSet<&BTreeSet<usize>> = all.iter().collect();
        for a in &all {
            for b in &all {
                for x in a.difference(b) {
                    let ok = b.difference(a).any(|y| {
                        let mut c = a.clone();
                        c.remove(x);
                        c.insert(*y);
                        lookup.contains(&c)
                    });
                    prop_assert!(ok, "no exchange for {:?} {:?} at {}", a, b, x);
                }
            }
        }
    }

    #[test]
    fn minors_vanish_exactly_on_dependent_sets(w in diagram(5, 9), seed in any::<u64>()) {
        let m = c_matrix_default(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<usize> = (1..=w.k()).collect();
        for _ in 0..8 {
            let mut cols: Vec<usize> = (1..=w.n()).collect();
            cols.sort_by_key(|_| rng.gen::<u32>());
            cols.truncate(w.k());
            cols.sort();
            let det = m.minor_det(&rows, &cols).unwrap();
            let set: BTreeSet<usize> = cols.iter().copied().collect();
            prop_assert_eq!(det.is_zero(), !is_independent(&w, &set));
            prop_assert_eq!(det.term_count(), m.bijection_count(&rows, &cols).unwrap());
            if w.k() >= 2 {
                let mut swapped = rows.clone();
                swapped.swap(0, 1);
                prop_assert_eq!(m.minor_det(&swapped, &cols).unwrap(), -det.clone());
            }
        }
    }

    #[test]
    fn radical_checks_hold(w in diagram(9, 12)) {
        let rep = verify_radical(&w, w.propagators()).unwrap();
        prop_assert!(rep.checks.radical_ok, "{:?}", rep.checks);
        prop_assert!(rep.checks.degree_is_4k);
    }

    #[test]
    fn denominator_does_not_depend_on_row_order(w in diagram(6, 10), seed in any::<u64>()) {
        let mut order = w.propagators().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        order.sort_by_key(|_| rng.gen::<u32>());
        let a = denominator_definition(&w, w.propagators()).unwrap();
        let b = denominator_definition(&w, &order).unwrap();
        prop_assert_eq!(a.degree(), b.degree());
        prop_assert!(verify_radical(&w, &order).unwrap().checks.radical_ok);
    }

    /// A quadratic factor of `R` divides `Δ_{I_i}` exactly when two
    /// propagators on a common edge `a` contribute `a` and `a + 1` to `I_i`.
    #[test]
    fn quadratic_factors_come_from_shared_edges(w in diagram(6, 11)) {
        let neck = grassmann_necklace(&w).unwrap();
        let rep = verify_radical(&w, w.propagators()).unwrap();
        let quadratics: Vec<SparsePolynomial> = rep
            .r_definition
            .factor_list()
            .into_iter()
            .filter(|f| f.degree() == Some(2))
            .map(SparsePolynomial::normalized)
            .collect();
        let n = w.n();
        for ix in &rep.indices {
            let divides: BTreeSet<String> = quadratics
                .iter()
                .filter(|q| ix.delta.exact_divide(q).unwrap().is_some())
                .map(|q| q.to_string())
                .collect();
            let mut structural = BTreeSet::new();
            for (a_idx, p) in w.propagators().iter().enumerate() {
                for (b_idx, q) in w.propagators().iter().enumerate() {
                    let (Some(vp), Some(vq)) = (neck.assignment(ix.index, p), neck.assignment(ix.index, q)) else {
                        continue;
                    };
                    let next = wrap(vp as i64 + 1, n);
                    if p.has_end(vp) && q.has_end(vp) && vq == next {
                        let x = |r: usize, v: usize| SparsePolynomial::var(Variable::new(r + 1, v));
                        let f = &(&x(a_idx, vp) * &x(b_idx, next)) - &(&x(b_idx, vp) * &x(a_idx, next));
                        structural.insert(f.normalized().to_string());
                    }
                }
            }
            prop_assert_eq!(divides, structural, "index {}", ix.index);
        }
    }

    #[test]
    fn exact_division_round_trips(a in polynomial(), b in polynomial()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_divide(&b).unwrap(), Some(a.clone()));
        // `x_{9,9}` does not occur in `b`, so only a unit divides the sum.
        let bumped = &prod + &SparsePolynomial::var(Variable::new(9, 9));
        if b.unit_sign().is_none() {
            prop_assert_eq!(bumped.exact_divide(&b).unwrap(), None);
        }
    }

    #[test]
    fn ring_laws(a in polynomial(), b in polynomial(), c in polynomial()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }
}
