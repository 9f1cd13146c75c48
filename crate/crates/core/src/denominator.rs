//! The denominator `R(W)`, built edge by edge and again from the Grassmann
//! necklace, together with a check that it generates the radical of the
//! ideal spanned by the necklace minors.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagram::{wrap, Diagram, Propagator};
use crate::error::{Error, Result};
use crate::necklace::{grassmann_necklace, GrassmannNecklace};
use crate::sympoly::{c_matrix, FactoredPolynomial, SparsePolynomial, SymbolicMatrix, Variable};

/// Propagators with an end on edge `e`, ordered `p_1, ..., p_r`.
///
/// `p` precedes `q` when `p`'s other end is reached first walking the edges
/// `e - 1, e - 2, ...`.
pub fn edge_propagator_order(w: &Diagram, e: usize) -> Vec<Propagator> {
    let n = w.n();
    let mut on_edge: Vec<(usize, Propagator)> = w
        .propagators()
        .iter()
        .filter_map(|p| p.other_end(e).map(|other| ((e + n - other) % n, *p)))
        .collect();
    on_edge.sort();
    on_edge.into_iter().map(|(_, p)| p).collect()
}

/// One factor of `R_e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeFactor {
    Linear(Variable),
    /// `x_{a,e} x_{b,e+1} - x_{b,e} x_{a,e+1}` for rows `a`, `b`.
    Quadratic {
        a: usize,
        b: usize,
        e: usize,
        next: usize,
    },
}

impl EdgeFactor {
    pub fn to_polynomial(&self) -> SparsePolynomial {
        match *self {
            EdgeFactor::Linear(v) => SparsePolynomial::var(v),
            EdgeFactor::Quadratic { a, b, e, next } => {
                let x = |r, v| SparsePolynomial::var(Variable::new(r, v));
                &(&x(a, e) * &x(b, next)) - &(&x(b, e) * &x(a, next))
            }
        }
    }
}

impl fmt::Display for EdgeFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EdgeFactor::Linear(v) => write!(f, "{v}"),
            EdgeFactor::Quadratic { a, b, e, next } => write!(
                f,
                "({} {} - {} {})",
                Variable::new(a, e),
                Variable::new(b, next),
                Variable::new(b, e),
                Variable::new(a, next)
            ),
        }
    }
}

/// `R_e` for a single edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFactorization {
    pub edge: usize,
    pub ordered_props: Vec<Propagator>,
    pub factors: Vec<EdgeFactor>,
}

impl EdgeFactorization {
    pub fn polynomial(&self) -> FactoredPolynomial {
        FactoredPolynomial::from_factors(self.factors.iter().map(EdgeFactor::to_polynomial))
    }

    /// Factors written side by side, e.g. `x_{2,5} (x_{2,4} x_{1,5} - x_{1,4} x_{2,5}) x_{1,4}`.
    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn row_of(m: &SymbolicMatrix, p: &Propagator) -> usize {
    m.row_of(p).expect("matrix rows cover the diagram")
}

/// `R_e` with rows numbered by `order`.
pub fn edge_factorization(
    w: &Diagram,
    e: usize,
    order: &[Propagator],
) -> Result<EdgeFactorization> {
    w.check_vertex(e)?;
    let m = c_matrix(w, order)?;
    Ok(edge_factorization_in(w, e, &m))
}

fn edge_factorization_in(w: &Diagram, e: usize, m: &SymbolicMatrix) -> EdgeFactorization {
    let next = w.next(e);
    let props = edge_propagator_order(w, e);
    let rows: Vec<usize> = props.iter().map(|p| row_of(m, p)).collect();
    let mut factors = Vec::new();
    match rows.as_slice() {
        [] => {}
        [r] => {
            factors.push(EdgeFactor::Linear(Variable::new(*r, e)));
            factors.push(EdgeFactor::Linear(Variable::new(*r, next)));
        }
        _ => {
            factors.push(EdgeFactor::Linear(Variable::new(rows[0], next)));
            for pair in rows.windows(2) {
                factors.push(EdgeFactor::Quadratic {
                    a: pair[0],
                    b: pair[1],
                    e,
                    next,
                });
            }
            factors.push(EdgeFactor::Linear(Variable::new(rows[rows.len() - 1], e)));
        }
    }
    EdgeFactorization {
        edge: e,
        ordered_props: props,
        factors,
    }
}

/// `R_1, ..., R_n`.
pub fn edge_factorizations(w: &Diagram, order: &[Propagator]) -> Result<Vec<EdgeFactorization>> {
    let m = c_matrix(w, order)?;
    Ok((1..=w.n())
        .map(|e| edge_factorization_in(w, e, &m))
        .collect())
}

/// `R(W)` as the product of the edge factors, kept as written.
pub fn denominator_definition(w: &Diagram, order: &[Propagator]) -> Result<FactoredPolynomial> {
    w.require_admissible()?;
    let mut out = FactoredPolynomial::one();
    for ef in edge_factorizations(w, order)? {
        out.extend(&ef.polynomial());
    }
    Ok(out)
}

/// `S_i`: propagators whose contributed vertex changes between `I_{i-1}`
/// and `I_i`, with `I_0 = I_n`. Listed in diagram order.
pub fn s_set(w: &Diagram, neck: &GrassmannNecklace, i: usize) -> Result<Vec<Propagator>> {
    w.check_vertex(i)?;
    let prev = wrap(i as i64 - 1, w.n());
    let mut out = Vec::new();
    for p in w.propagators() {
        let now = neck.assignment(i, p).ok_or(Error::UnknownPropagator(*p))?;
        let before = neck
            .assignment(prev, p)
            .ok_or(Error::UnknownPropagator(*p))?;
        if now != before {
            out.push(*p);
        }
    }
    Ok(out)
}

/// Rows of `S_i` and the columns `I_i(S_i)`, both ascending by `I_i(p)`, so
/// that `prod x_{p, I_i(p)}` enters with coefficient `+1`.
fn r_minor(
    m: &SymbolicMatrix,
    neck: &GrassmannNecklace,
    s: &[Propagator],
    i: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut pairs = Vec::with_capacity(s.len());
    for p in s {
        let v = neck.assignment(i, p).ok_or(Error::UnknownPropagator(*p))?;
        pairs.push((v, row_of(m, p)));
    }
    pairs.sort();
    Ok(pairs.into_iter().map(|(v, r)| (r, v)).unzip())
}

/// `r_i`, the minor of `C(W)` on rows `S_i` and columns `I_i(S_i)`.
pub fn r_factor(
    w: &Diagram,
    neck: &GrassmannNecklace,
    i: usize,
    order: &[Propagator],
) -> Result<SparsePolynomial> {
    let m = c_matrix(w, order)?;
    let s = s_set(w, neck, i)?;
    let (rows, cols) = r_minor(&m, neck, &s, i)?;
    m.minor_det(&rows, &cols)
}

fn r_factored(
    m: &SymbolicMatrix,
    neck: &GrassmannNecklace,
    s: &[Propagator],
    i: usize,
) -> Result<FactoredPolynomial> {
    let (rows, cols) = r_minor(m, neck, s, i)?;
    m.factor_minor(&rows, &cols)?
        .ok_or_else(|| Error::InvalidDiagram(format!("r_{i} vanishes")))
}

/// `R = r_1 r_2 ... r_n`, each `r_i` split into its block factors.
pub fn denominator_via_necklace(w: &Diagram, order: &[Propagator]) -> Result<FactoredPolynomial> {
    w.require_admissible()?;
    let m = c_matrix(w, order)?;
    let neck = grassmann_necklace(w)?;
    let mut out = FactoredPolynomial::one();
    for i in 1..=w.n() {
        let s = s_set(w, &neck, i)?;
        out.extend(&r_factored(&m, &neck, &s, i)?);
    }
    Ok(out)
}

/// Per-index data of a [`DenominatorReport`].
#[derive(Clone, Debug)]
pub struct IndexReport {
    pub index: usize,
    pub s_set: Vec<Propagator>,
    /// `I_i(S_i)`, ascending.
    pub columns: Vec<usize>,
    pub r: FactoredPolynomial,
    /// `Δ_{I_i}`, rows in matrix order.
    pub delta: SparsePolynomial,
    pub r_divides_delta: bool,
    pub delta_reduces: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalChecks {
    pub r_divides_delta: bool,
    /// Equal as polynomials.
    pub products_equal: bool,
    /// Equal after possibly negating one side.
    pub products_equal_up_to_sign: bool,
    pub square_free: bool,
    pub deltas_reduce: bool,
    pub degree_is_4k: bool,
    pub radical_ok: bool,
}

#[derive(Clone, Debug)]
pub struct DenominatorReport {
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Propagator>,
    pub edges: Vec<EdgeFactorization>,
    pub r_definition: FactoredPolynomial,
    pub r_necklace: FactoredPolynomial,
    pub indices: Vec<IndexReport>,
    pub checks: RadicalChecks,
}

/// Divide out factors of `by` from `p` for as long as any of them divides.
/// Returns what is left.
pub fn reduce_by_factors(
    p: &SparsePolynomial,
    by: &[&SparsePolynomial],
) -> Result<SparsePolynomial> {
    let mut rest = p.clone();
    for f in by {
        while rest.unit_sign().is_none() {
            match rest.exact_divide(f)? {
                Some(q) => rest = q,
                None => break,
            }
        }
    }
    Ok(rest)
}

/// Build `R(W)` both ways and check the radical statement on every minor
/// `Δ_{I_i}`. Failing checks are reported, not raised.
pub fn verify_radical(w: &Diagram, order: &[Propagator]) -> Result<DenominatorReport> {
    w.require_admissible()?;
    let m = c_matrix(w, order)?;
    let neck = grassmann_necklace(w)?;
    let edges: Vec<EdgeFactorization> = (1..=w.n())
        .map(|e| edge_factorization_in(w, e, &m))
        .collect();
    let mut r_definition = FactoredPolynomial::one();
    for ef in &edges {
        r_definition.extend(&ef.polynomial());
    }
    let mut candidates: Vec<SparsePolynomial> = Vec::new();
    for f in r_definition.factor_list() {
        let f = f.normalized();
        if !candidates.contains(&f) {
            candidates.push(f);
        }
    }
    let candidate_refs: Vec<&SparsePolynomial> = candidates.iter().collect();
    let all_rows: Vec<usize> = (1..=w.k()).collect();

    let indices: Vec<IndexReport> = (1..=w.n())
        .into_par_iter()
        .map(|i| -> Result<IndexReport> {
            let s = s_set(w, &neck, i)?;
            let (_, columns) = r_minor(&m, &neck, &s, i)?;
            let r = r_factored(&m, &neck, &s, i)?;
            let cols: Vec<usize> = neck.term(i).iter().copied().collect();
            let delta = m.minor_det(&all_rows, &cols)?;
            let r_divides_delta = !delta.is_zero() && delta.exact_divide(&r.expand())?.is_some();
            let delta_reduces = !delta.is_zero()
                && reduce_by_factors(&delta, &candidate_refs)?
                    .unit_sign()
                    .is_some();
            Ok(IndexReport {
                index: i,
                s_set: s,
                columns,
                r,
                delta,
                r_divides_delta,
                delta_reduces,
            })
        })
        .collect::<Result<_>>()?;

    let mut r_necklace = FactoredPolynomial::one();
    for ix in &indices {
        r_necklace.extend(&ix.r);
    }
    let def = r_definition.expand();
    let via = r_necklace.expand();
    let products_equal = def == via;
    let products_equal_up_to_sign = products_equal || def == -via;
    let square_free = r_definition.is_square_free();
    let r_divides_delta = indices.iter().all(|ix| ix.r_divides_delta);
    let deltas_reduce = indices.iter().all(|ix| ix.delta_reduces);
    let degree_is_4k = r_definition.degree() as usize == 4 * w.k();
    let checks = RadicalChecks {
        r_divides_delta,
        products_equal,
        products_equal_up_to_sign,
        square_free,
        deltas_reduce,
        degree_is_4k,
        radical_ok: r_divides_delta && products_equal && square_free && deltas_reduce,
    };
    Ok(DenominatorReport {
        k: w.k(),
        n: w.n(),
        rows: m.rows().to_vec(),
        edges,
        r_definition,
        r_necklace,
        indices,
        checks,
    })
}

impl DenominatorReport {
    /// `R(W)` in display form: the edge factors side by side, `R_1` first.
    pub fn denominator_string(&self) -> String {
        let parts: Vec<String> = self
            .edges
            .iter()
            .filter(|ef| !ef.factors.is_empty())
            .map(EdgeFactorization::render)
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// The integrand as `d x_{1,.} ... / R(W)`, with one differential per
    /// nonzero entry of `C(W)`, rows in order and each row's vertices
    /// starting from its first edge.
    pub fn omega_string(&self) -> String {
        let mut diffs = Vec::new();
        for (r, p) in self.rows.iter().enumerate() {
            for v in [
                p.lo(),
                wrap(p.lo() as i64 + 1, self.n),
                p.hi(),
                wrap(p.hi() as i64 + 1, self.n),
            ] {
                diffs.push(format!("d{}", Variable::new(r + 1, v)));
            }
        }
        let num = if diffs.is_empty() {
            "1".to_string()
        } else {
            diffs.join(" ")
        };
        format!("{num} / ({})", self.denominator_string())
    }

    pub fn to_json(&self) -> DenominatorJson {
        DenominatorJson {
            k: self.k,
            n: self.n,
            rows: self.rows.clone(),
            edges: self
                .edges
                .iter()
                .map(|ef| EdgeJson {
                    edge: ef.edge,
                    ordered_props: ef.ordered_props.clone(),
                    factors: ef.factors.iter().map(|f| f.to_string()).collect(),
                })
                .collect(),
            r_definition: self.r_definition.to_string(),
            r_necklace: self.r_necklace.to_string(),
            denominator: self.denominator_string(),
            degree: self.r_definition.degree(),
            indices: self
                .indices
                .iter()
                .map(|ix| IndexJson {
                    index: ix.index,
                    s_set: ix.s_set.clone(),
                    columns: ix.columns.clone(),
                    r: ix.r.to_string(),
                    delta: ix.delta.to_string(),
                    r_divides_delta: ix.r_divides_delta,
                    delta_reduces: ix.delta_reduces,
                })
                .collect(),
            checks: self.checks,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeJson {
    pub edge: usize,
    pub ordered_props: Vec<Propagator>,
    pub factors: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexJson {
    pub index: usize,
    pub s_set: Vec<Propagator>,
    pub columns: Vec<usize>,
    pub r: String,
    pub delta: String,
    pub r_divides_delta: bool,
    pub delta_reduces: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DenominatorJson {
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Propagator>,
    pub edges: Vec<EdgeJson>,
    pub r_definition: String,
    pub r_necklace: String,
    pub denominator: String,
    pub degree: u32,
    pub indices: Vec<IndexJson>,
    pub checks: RadicalChecks,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prop(a: usize, b: usize) -> Propagator {
        Propagator::new(a, b).unwrap()
    }

    fn x(r: usize, v: usize) -> SparsePolynomial {
        SparsePolynomial::var(Variable::new(r, v))
    }

    fn eight() -> Diagram {
        Diagram::from_pairs(8, &[[1, 4], [2, 4], [5, 7], [5, 8]]).unwrap()
    }

    fn seven() -> Diagram {
        Diagram::from_pairs(7, &[[1, 6], [1, 5], [1, 4]]).unwrap()
    }

    fn product(ps: &[SparsePolynomial]) -> SparsePolynomial {
        ps.iter().fold(SparsePolynomial::one(), |acc, p| &acc * p)
    }

    #[test]
    fn edge_order_reproduces_r4_and_r5() {
        let w = eight();
        assert_eq!(edge_propagator_order(&w, 4), vec![prop(2, 4), prop(1, 4)]);
        assert_eq!(edge_propagator_order(&w, 5), vec![prop(5, 8), prop(5, 7)]);
        assert_eq!(edge_propagator_order(&w, 3), vec![]);

        let r4 = edge_factorization(&w, 4, w.propagators()).unwrap();
        assert_eq!(
            r4.render(),
            "x_{2,5} (x_{2,4} x_{1,5} - x_{1,4} x_{2,5}) x_{1,4}"
        );
        let q4 = &(&x(2, 4) * &x(1, 5)) - &(&x(2, 5) * &x(1, 4));
        assert_eq!(r4.polynomial().expand(), product(&[x(2, 5), q4, x(1, 4)]));

        let r5 = edge_factorization(&w, 5, w.propagators()).unwrap();
        assert_eq!(
            r5.render(),
            "x_{4,6} (x_{4,5} x_{3,6} - x_{3,5} x_{4,6}) x_{3,5}"
        );
        let q5 = &(&x(4, 5) * &x(3, 6)) - &(&x(3, 5) * &x(4, 6));
        assert_eq!(r5.polynomial().expand(), product(&[x(4, 6), q5, x(3, 5)]));
    }

    #[test]
    fn edge_order_on_seven_vertex_example() {
        assert_eq!(
            edge_propagator_order(&seven(), 1),
            vec![prop(1, 6), prop(1, 5), prop(1, 4)]
        );
    }

    #[test]
    fn eight_vertex_definition() {
        let w = eight();
        let edges = edge_factorizations(&w, w.propagators()).unwrap();
        let rendered: Vec<String> = edges.iter().map(EdgeFactorization::render).collect();
        assert_eq!(
            rendered,
            vec![
                "x_{1,1} x_{1,2}",
                "x_{2,2} x_{2,3}",
                "1",
                "x_{2,5} (x_{2,4} x_{1,5} - x_{1,4} x_{2,5}) x_{1,4}",
                "x_{4,6} (x_{4,5} x_{3,6} - x_{3,5} x_{4,6}) x_{3,5}",
                "1",
                "x_{3,7} x_{3,8}",
                "x_{4,8} x_{4,1}",
            ]
        );
        let r = denominator_definition(&w, w.propagators()).unwrap();
        assert_eq!(r.degree(), 16);
        assert_eq!(r.factor_list().len(), 14);
    }

    #[test]
    fn empty_diagram_has_unit_denominator() {
        let w = Diagram::empty(6);
        assert_eq!(
            denominator_definition(&w, &[]).unwrap().expand(),
            SparsePolynomial::one()
        );
        assert_eq!(
            denominator_via_necklace(&w, &[]).unwrap().expand(),
            SparsePolynomial::one()
        );
        let rep = verify_radical(&w, &[]).unwrap();
        assert!(rep.checks.radical_ok && rep.checks.products_equal && rep.checks.degree_is_4k);
        assert_eq!(rep.denominator_string(), "1");
    }

    // a=x11 b=x12 c=x16 d=x17 e=x21 f=x22 g=x25 h=x26 i=x31 j=x32 k=x34 l=x35
    #[test]
    fn seven_vertex_r_factors() {
        let w = seven();
        let neck = grassmann_necklace(&w).unwrap();
        let (p, q, s) = (prop(1, 6), prop(1, 5), prop(1, 4));
        assert_eq!(s_set(&w, &neck, 7).unwrap(), vec![q, s]);
        assert_eq!(s_set(&w, &neck, 4).unwrap(), vec![]);
        assert_eq!(s_set(&w, &neck, 2).unwrap(), vec![p, q]);

        let (a, b, c, d) = (x(1, 1), x(1, 2), x(1, 6), x(1, 7));
        let (e, f, g, h) = (x(2, 1), x(2, 2), x(2, 5), x(2, 6));
        let (i, j, k, l) = (x(3, 1), x(3, 2), x(3, 4), x(3, 5));
        let af_be = &(&a * &f) - &(&b * &e);
        let ej_fi = &(&e * &j) - &(&f * &i);
        let expected = [
            &af_be * &k,
            &g * &b,
            c.clone(),
            SparsePolynomial::one(),
            product(&[l.clone(), h.clone(), d.clone()]),
            i.clone(),
            ej_fi.clone(),
        ];
        for (idx, want) in expected.iter().enumerate() {
            let got = r_factor(&w, &neck, idx + 1, w.propagators()).unwrap();
            assert_eq!(&got, want, "r_{}", idx + 1);
        }
        let r = denominator_via_necklace(&w, w.propagators()).unwrap();
        assert_eq!(r.expand(), product(&[af_be, k, g, b, c, l, h, d, i, ej_fi]));
        assert_eq!(r.factor_list().len(), 10);
        assert_eq!(
            r.expand(),
            denominator_definition(&w, w.propagators())
                .unwrap()
                .expand()
        );
    }

    #[test]
    fn seven_vertex_report() {
        let w = seven();
        let rep = verify_radical(&w, w.propagators()).unwrap();
        assert!(rep.checks.radical_ok, "{:?}", rep.checks);
        assert!(rep.checks.products_equal);
        let kgb = product(&[x(3, 4), x(2, 5), x(1, 2)]);
        // Full minors use rows in matrix order, so only the sign-free form is fixed.
        assert_eq!(rep.indices[1].delta.normalized(), kgb);
    }

    #[test]
    fn eight_vertex_report() {
        let w = eight();
        let rep = verify_radical(&w, w.propagators()).unwrap();
        let c = rep.checks;
        assert!(
            c.radical_ok && c.products_equal && c.degree_is_4k && c.square_free,
            "{c:?}"
        );
        assert_eq!(
            rep.omega_string(),
            "dx_{1,1} dx_{1,2} dx_{1,4} dx_{1,5} dx_{2,2} dx_{2,3} dx_{2,4} dx_{2,5} \
             dx_{3,5} dx_{3,6} dx_{3,7} dx_{3,8} dx_{4,5} dx_{4,6} dx_{4,8} dx_{4,1} / \
             (x_{1,1} x_{1,2} x_{2,2} x_{2,3} x_{2,5} (x_{2,4} x_{1,5} - x_{1,4} x_{2,5}) x_{1,4} \
             x_{4,6} (x_{4,5} x_{3,6} - x_{3,5} x_{4,6}) x_{3,5} x_{3,7} x_{3,8} x_{4,8} x_{4,1})"
        );
    }

    #[test]
    fn row_order_is_respected() {
        let w = eight();
        let order = [prop(5, 8), prop(5, 7), prop(2, 4), prop(1, 4)];
        let rep = verify_radical(&w, &order).unwrap();
        assert!(rep.checks.radical_ok, "{:?}", rep.checks);
        assert_eq!(rep.edges[0].render(), "x_{4,1} x_{4,2}");
    }

    #[test]
    fn reduce_stops_at_units() {
        let p = product(&[x(1, 1), x(1, 1), x(2, 2)]);
        let rest = reduce_by_factors(&p, &[&x(1, 1), &x(2, 2)]).unwrap();
        assert!(rest.is_one());
        let rest = reduce_by_factors(&p, &[&x(2, 2)]).unwrap();
        assert_eq!(rest, &x(1, 1) * &x(1, 1));
    }

    #[test]
    fn inadmissible_input_is_rejected() {
        let w = Diagram::from_pairs(7, &[[1, 3], [2, 4]]).unwrap();
        assert!(verify_radical(&w, w.propagators()).is_err());
    }
}
