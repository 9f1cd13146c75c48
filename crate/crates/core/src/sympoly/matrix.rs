use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::factored::FactoredPolynomial;
use super::poly::{Monomial, SparsePolynomial, Variable};
use crate::diagram::{Diagram, Propagator};
use crate::error::{Error, Result};

/// `C(W)`: one row per propagator, in a fixed order, one column per vertex.
/// Entry `(p, v)` is the variable `x_{row(p), v}` when `v ∈ V(p)`, else `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    n: usize,
    rows: Vec<Propagator>,
    supports: Vec<BTreeSet<usize>>,
}

impl SymbolicMatrix {
    pub fn rows(&self) -> &[Propagator] {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based row of `p`.
    pub fn row_of(&self, p: &Propagator) -> Option<usize> {
        self.rows.iter().position(|q| q == p).map(|i| i + 1)
    }

    /// Entry at 1-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Option<Variable> {
        if row == 0 || row > self.rows.len() {
            return None;
        }
        self.supports[row - 1]
            .contains(&col)
            .then(|| Variable::new(row, col))
    }

    fn check(&self, rows: &[usize], cols: &[usize]) -> Result<()> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch(rows.len(), cols.len()));
        }
        if let Some(&r) = rows.iter().find(|&&r| r == 0 || r > self.rows.len()) {
            return Err(Error::RowOutOfRange(r));
        }
        if let Some(&c) = cols.iter().find(|&&c| c == 0 || c > self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: c,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Every bijection from `rows` (in the given order) to `cols` (ascending)
    /// that only hits nonzero entries, with its permutation sign.
    fn bijections(&self, rows: &[usize], cols: &[usize]) -> Vec<(i8, Vec<Variable>)> {
        let mut cols = cols.to_vec();
        cols.sort();
        let m = rows.len();
        let mut out = Vec::new();
        let mut used = vec![false; m];
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        fn rec(
            mat: &SymbolicMatrix,
            rows: &[usize],
            cols: &[usize],
            used: &mut [bool],
            chosen: &mut Vec<usize>,
            out: &mut Vec<(i8, Vec<Variable>)>,
        ) {
            let t = chosen.len();
            if t == rows.len() {
                let mut inversions = 0;
                for a in 0..chosen.len() {
                    for b in a + 1..chosen.len() {
                        if chosen[a] > chosen[b] {
                            inversions += 1;
                        }
                    }
                }
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                let vars = chosen
                    .iter()
                    .enumerate()
                    .map(|(ri, &ci)| Variable::new(rows[ri], cols[ci]))
                    .collect();
                out.push((sign, vars));
                return;
            }
            for ci in 0..cols.len() {
                if used[ci] || mat.entry(rows[t], cols[ci]).is_none() {
                    continue;
                }
                used[ci] = true;
                chosen.push(ci);
                rec(mat, rows, cols, used, chosen, out);
                chosen.pop();
                used[ci] = false;
            }
        }
        rec(self, rows, &cols, &mut used, &mut chosen, &mut out);
        out
    }

    /// Determinant of the minor on 1-based `rows` (in the order given) and
    /// vertex columns `cols` (taken in ascending order). Sums signed monomials
    /// over the bijections that avoid zero entries.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<SparsePolynomial> {
        self.check(rows, cols)?;
        let mut out = SparsePolynomial::zero();
        for (sign, vars) in self.bijections(rows, cols) {
            out.add_term(Monomial::from_vars(vars), BigInt::from(sign));
        }
        Ok(out)
    }

    /// Number of zero-avoiding bijections (the monomial count of the minor,
    /// since no two bijections give the same monomial).
    pub fn bijection_count(&self, rows: &[usize], cols: &[usize]) -> Result<usize> {
        self.check(rows, cols)?;
        Ok(self.bijections(rows, cols).len())
    }

    /// Factor a minor along the connected components of its support.
    ///
    /// Keep only the entries used by some zero-avoiding bijection; the
    /// components of that bipartite graph are square blocks, and the minor is
    /// the product of the block determinants up to sign. Each block's
    /// determinant is irreducible because its entries are distinct
    /// indeterminates and every entry lies on some perfect matching.
    /// Returns `None` for a vanishing minor.
    pub fn factor_minor(
        &self,
        rows: &[usize],
        cols: &[usize],
    ) -> Result<Option<FactoredPolynomial>> {
        let det = self.minor_det(rows, cols)?;
        if det.is_zero() {
            return Ok(None);
        }
        if rows.is_empty() {
            return Ok(Some(FactoredPolynomial::one()));
        }
        let used: BTreeSet<Variable> = det.variables().into_iter().collect();
        // Union-find over rows (0..m) and columns (m..2m).
        let mut sorted_cols = cols.to_vec();
        sorted_cols.sort();
        let m = rows.len();
        let mut parent: Vec<usize> = (0..2 * m).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in sorted_cols.iter().enumerate() {
                if used.contains(&Variable::new(r, c)) {
                    let (a, b) = (find(&mut parent, ri), find(&mut parent, m + ci));
                    parent[a] = b;
                }
            }
        }
        let mut blocks: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (ri, &r) in rows.iter().enumerate() {
            let root = find(&mut parent, ri);
            blocks.entry(root).or_default().0.push(r);
        }
        for (ci, &c) in sorted_cols.iter().enumerate() {
            let root = find(&mut parent, m + ci);
            blocks.entry(root).or_default().1.push(c);
        }
        // Columns were pushed in ascending order, so this lists blocks by
        // their first column.
        let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = blocks.into_values().collect();
        blocks.sort_by_key(|(_, cols)| cols[0]);
        let mut factors = Vec::with_capacity(blocks.len());
        for (block_rows, block_cols) in &blocks {
            let mut block_rows = block_rows.clone();
            block_rows.sort();
            factors.push(self.minor_det(&block_rows, block_cols)?.normalized());
        }
        let mut fp = FactoredPolynomial::from_factors(factors);
        let expanded = fp.expand();
        if expanded == det {
            Ok(Some(fp))
        } else if -expanded == det {
            fp.negate();
            Ok(Some(fp))
        } else {
            unreachable!("block determinants multiply back to the minor up to sign")
        }
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            k: self.k(),
            n: self.n,
            rows: self.rows.clone(),
            entries: (1..=self.k())
                .map(|r| {
                    (1..=self.n)
                        .map(|c| {
                            self.entry(r, c)
                                .map(|v| v.to_string())
                                .unwrap_or_else(|| "0".into())
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Propagator>,
    pub entries: Vec<Vec<String>>,
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self.to_json().entries;
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for (row, p) in cells.iter().zip(&self.rows) {
            let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            writeln!(f, "{}  {p}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `C(W)` with rows in `order`, which must list each propagator exactly once.
pub fn c_matrix(w: &Diagram, order: &[Propagator]) -> Result<SymbolicMatrix> {
    let mut given: Vec<Propagator> = order.to_vec();
    given.sort();
    if given != w.sorted_props() {
        return Err(Error::InvalidOrder(
            "row order must list every propagator of the diagram exactly once".into(),
        ));
    }
    Ok(SymbolicMatrix {
        n: w.n(),
        rows: order.to_vec(),
        supports: order.iter().map(|p| p.support(w.n())).collect(),
    })
}

/// `C(W)` with rows in the diagram's own order.
pub fn c_matrix_default(w: &Diagram) -> SymbolicMatrix {
    c_matrix(w, w.propagators()).expect("diagram order is a permutation of itself")
}
