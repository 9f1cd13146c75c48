//! Named invariant sweeps over enumerated diagrams, used by `wld selftest`.
//!
//! Every case reports how many diagrams it looked at and the first failure it
//! hit, if any. Cases run their diagrams in parallel; the report order is
//! fixed.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::configs::{find_small_config, validates};
use crate::denominator::{
    denominator_definition, denominator_via_necklace, r_factor, s_set, verify_radical,
};
use crate::diagram::{wrap, Diagram, Propagator};
use crate::enumerate::{admissible_up_to, enumerate_weakly_admissible, random_corpus};
use crate::le::{le_from_necklace, validate_le};
use crate::matroid::{bases, bases_from_necklace, lexmin_basis};
use crate::necklace::grassmann_necklace;
use crate::sympoly::{SparsePolynomial, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub criterion: u8,
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub millis: u128,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {:<26} checked={:<6} failures={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.checked,
            self.failures
        )?;
        if let Some(msg) = &self.first_failure {
            write!(f, "  first: {msg}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    /// Largest `n` for the exhaustive sweeps.
    pub max_n: usize,
    /// Random admissible diagrams with `9 <= n <= 12` added to the corpus of
    /// the denominator and dimension cases.
    pub random: usize,
    pub seed: u64,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            max_n: 8,
            random: 500,
            seed: 2021,
        }
    }
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sweep<F>(criterion: u8, name: &'static str, diagrams: &[Diagram], check: F) -> CaseResult
where
    F: Fn(&Diagram) -> Check + Sync,
{
    let start = Instant::now();
    let failures: Vec<String> = diagrams
        .par_iter()
        .filter_map(|w| check(w).err().map(|e| format!("{w}: {e}")))
        .collect();
    CaseResult {
        criterion,
        name,
        checked: diagrams.len(),
        failures: failures.len(),
        first_failure: failures.into_iter().next(),
        millis: start.elapsed().as_millis(),
    }
}

fn single(criterion: u8, name: &'static str, check: impl Fn() -> Check) -> CaseResult {
    let start = Instant::now();
    let res = check();
    CaseResult {
        criterion,
        name,
        checked: 1,
        failures: usize::from(res.is_err()),
        first_failure: res.err(),
        millis: start.elapsed().as_millis(),
    }
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn prop(a: usize, b: usize) -> Propagator {
    Propagator::new(a, b).expect("fixed example")
}

fn x(r: usize, v: usize) -> SparsePolynomial {
    SparsePolynomial::var(Variable::new(r, v))
}

fn eight_vertex() -> Diagram {
    Diagram::from_pairs(8, &[[1, 4], [2, 4], [5, 7], [5, 8]]).expect("fixed example")
}

fn seven_vertex() -> Diagram {
    Diagram::from_pairs(7, &[[1, 6], [1, 5], [1, 4]]).expect("fixed example")
}

fn golden_necklace() -> Check {
    let w = eight_vertex();
    let neck = grassmann_necklace(&w).map_err(|e| e.to_string())?;
    let want = [
        [1, 2, 3, 5],
        [2, 3, 5, 6],
        [3, 4, 5, 6],
        [4, 5, 6, 7],
        [5, 6, 7, 1],
        [6, 7, 1, 2],
        [7, 8, 1, 2],
        [8, 1, 2, 3],
    ];
    for (i, t) in want.iter().enumerate() {
        ensure(neck.term(i + 1) == &set(t), || {
            format!("I_{} = {:?}", i + 1, neck.term(i + 1))
        })?;
    }
    for (p, v) in [
        (prop(5, 8), 1),
        (prop(1, 4), 2),
        (prop(2, 4), 3),
        (prop(5, 7), 5),
    ] {
        ensure(neck.assignment(1, &p) == Some(v), || {
            format!("I_1({p}) = {:?}", neck.assignment(1, &p))
        })?;
    }
    Ok(())
}

fn golden_denominator_eight() -> Check {
    let w = eight_vertex();
    let r = denominator_definition(&w, w.propagators()).map_err(|e| e.to_string())?;
    let q4 = &(&x(2, 4) * &x(1, 5)) - &(&x(2, 5) * &x(1, 4));
    let q5 = &(&x(4, 5) * &x(3, 6)) - &(&x(3, 5) * &x(4, 6));
    let want = [
        x(1, 1),
        x(1, 2),
        x(2, 2),
        x(2, 3),
        x(2, 5),
        q4,
        x(1, 4),
        x(4, 6),
        q5,
        x(3, 5),
        x(3, 7),
        x(3, 8),
        x(4, 8),
        x(4, 1),
    ];
    let got: Vec<SparsePolynomial> = r.factor_list().into_iter().cloned().collect();
    ensure(r.sign() == 1 && got == want, || format!("R(W) = {r}"))
}

fn golden_denominator_seven() -> Check {
    let w = seven_vertex();
    let neck = grassmann_necklace(&w).map_err(|e| e.to_string())?;
    let want_terms = [
        [1, 2, 4],
        [2, 4, 5],
        [4, 5, 6],
        [4, 5, 6],
        [5, 6, 7],
        [6, 7, 1],
        [7, 1, 2],
    ];
    for (i, t) in want_terms.iter().enumerate() {
        ensure(neck.term(i + 1) == &set(t), || {
            format!("I_{} = {:?}", i + 1, neck.term(i + 1))
        })?;
    }
    let (p, q, s) = (prop(1, 6), prop(1, 5), prop(1, 4));
    for (i, want) in [(7, vec![q, s]), (4, vec![]), (2, vec![p, q])] {
        let got = s_set(&w, &neck, i).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("S_{i} = {got:?}"))?;
    }
    let (a, b, c, d) = (x(1, 1), x(1, 2), x(1, 6), x(1, 7));
    let (e, f, g, h) = (x(2, 1), x(2, 2), x(2, 5), x(2, 6));
    let (i, j, k, l) = (x(3, 1), x(3, 2), x(3, 4), x(3, 5));
    let af_be = &(&a * &f) - &(&b * &e);
    let ej_fi = &(&e * &j) - &(&f * &i);
    let want_r = [
        &af_be * &k,
        &g * &b,
        c.clone(),
        SparsePolynomial::one(),
        &(&l * &h) * &d,
        i.clone(),
        ej_fi.clone(),
    ];
    for (idx, want) in want_r.iter().enumerate() {
        let got = r_factor(&w, &neck, idx + 1, w.propagators()).map_err(|e| e.to_string())?;
        ensure(&got == want, || format!("r_{} = {got}", idx + 1))?;
    }
    let product = [af_be, k, g, b, c, l, h, d, i, ej_fi]
        .iter()
        .fold(SparsePolynomial::one(), |acc, p| &acc * p);
    let r = denominator_via_necklace(&w, w.propagators()).map_err(|e| e.to_string())?;
    ensure(r.expand() == product, || format!("R = {r}"))
}

fn radical(w: &Diagram) -> Check {
    let rep = verify_radical(w, w.propagators()).map_err(|e| e.to_string())?;
    let c = rep.checks;
    ensure(c.radical_ok && c.degree_is_4k, || format!("{c:?}"))
}

fn dimension(w: &Diagram) -> Check {
    let neck = grassmann_necklace(w).map_err(|e| e.to_string())?;
    let le = le_from_necklace(&neck).map_err(|e| e.to_string())?;
    ensure(validate_le(&le), || "not a Le diagram".into())?;
    ensure(le.plus_count() == 3 * w.k(), || {
        format!("{} plusses", le.plus_count())
    })
}

fn necklace_is_lexmin(w: &Diagram) -> Check {
    let neck = grassmann_necklace(w).map_err(|e| e.to_string())?;
    for i in 1..=w.n() {
        let lm = lexmin_basis(w, i).map_err(|e| e.to_string())?;
        ensure(neck.term(i) == &lm, || {
            format!("I_{i} = {:?}, lexmin {lm:?}", neck.term(i))
        })?;
    }
    ensure(bases_from_necklace(&neck) == bases(w), || {
        "Gale bases differ".into()
    })
}

fn no_fourth_vertex(w: &Diagram) -> Check {
    let neck = grassmann_necklace(w).map_err(|e| e.to_string())?;
    for i in 1..=w.n() {
        let before = wrap(i as i64 - 1, w.n());
        ensure(w.k() == 0 || !neck.term(i).contains(&before), || {
            format!("{before} in I_{i}")
        })?;
    }
    Ok(())
}

fn cyclic_intervals(w: &Diagram) -> Check {
    let neck = grassmann_necklace(w).map_err(|e| e.to_string())?;
    for p in w.propagators() {
        let ivs = neck.contribution_intervals(p).map_err(|e| e.to_string())?;
        let total: usize = ivs.values().map(|iv| iv.len()).sum();
        ensure(total == w.n(), || format!("intervals of {p} cover {total}"))?;
    }
    Ok(())
}

fn loops_and_coloops(w: &Diagram) -> Check {
    let neck = grassmann_necklace(w).map_err(|e| e.to_string())?;
    ensure(neck.loops() == w.non_supporting_vertices(), || {
        format!("loops {:?}", neck.loops())
    })?;
    ensure(neck.coloops().is_empty(), || {
        format!("coloops {:?}", neck.coloops())
    })
}

fn zero_column_insertion(w: &Diagram) -> Check {
    let neck = grassmann_necklace(w).map_err(|e| e.to_string())?;
    let le = le_from_necklace(&neck).map_err(|e| e.to_string())?;
    for v in w.non_supporting_vertices() {
        let smaller = w
            .remove_nonsupporting_vertex(v)
            .map_err(|e| e.to_string())?;
        let small_neck = grassmann_necklace(&smaller).map_err(|e| e.to_string())?;
        let small_le = le_from_necklace(&small_neck).map_err(|e| e.to_string())?;
        let lift = |u: usize| if u < v { u } else { u + 1 };
        let rows: Vec<usize> = small_le.row_labels().iter().map(|&u| lift(u)).collect();
        let mut plusses: Vec<(usize, usize)> = small_le
            .plus_cells()
            .into_iter()
            .map(|(r, c)| (lift(r), lift(c)))
            .collect();
        plusses.sort();
        let mut got = le.plus_cells();
        got.sort();
        ensure(rows == le.row_labels() && plusses == got, || {
            format!("removing {v} changes more than a zero column")
        })?;
    }
    Ok(())
}

fn dihedral_plus_count(w: &Diagram) -> Check {
    let base = crate::le::dimension(w).map_err(|e| e.to_string())?;
    for image in w.dihedral_orbit() {
        let d = crate::le::dimension(&image).map_err(|e| e.to_string())?;
        ensure(d == base, || {
            format!("{image} has dimension {d}, not {base}")
        })?;
    }
    Ok(())
}

fn small_config(w: &Diagram) -> Check {
    match find_small_config(w) {
        Some(c) => ensure(validates(w, &c), || format!("{c:?} does not re-validate")),
        None => Err("no configuration found".into()),
    }
}

/// Weakly admissible diagrams on `5..=max_n` vertices in which every vertex
/// supports a propagator.
pub fn fully_supported_weak(max_n: usize) -> Vec<Diagram> {
    let mut out = Vec::new();
    for n in 5..=max_n {
        for k in 1..=n {
            out.extend(
                enumerate_weakly_admissible(k, n)
                    .filter(|w| w.non_supporting_vertices().is_empty()),
            );
        }
    }
    out
}

pub fn run(opts: &SelftestOptions) -> Vec<CaseResult> {
    let exhaustive = admissible_up_to(1, opts.max_n);
    let mut corpus = exhaustive.clone();
    if opts.random > 0 {
        corpus.extend(random_corpus(opts.seed, opts.random, 9, 12));
    }
    let weak = fully_supported_weak(opts.max_n);
    vec![
        single(1, "golden_necklace", golden_necklace),
        single(2, "golden_denominator_8", golden_denominator_eight),
        single(3, "golden_denominator_7", golden_denominator_seven),
        sweep(4, "radical_theorem", &corpus, radical),
        sweep(5, "dimension_3k", &corpus, dimension),
        sweep(6, "necklace_lexmin_gale", &exhaustive, necklace_is_lexmin),
        sweep(7, "no_fourth_vertex", &exhaustive, no_fourth_vertex),
        sweep(7, "cyclic_intervals", &exhaustive, cyclic_intervals),
        sweep(7, "loops_coloops", &exhaustive, loops_and_coloops),
        sweep(
            7,
            "zero_column_insertion",
            &exhaustive,
            zero_column_insertion,
        ),
        sweep(7, "dihedral_plus_count", &exhaustive, dihedral_plus_count),
        sweep(8, "small_configuration", &weak, small_config),
    ]
}
