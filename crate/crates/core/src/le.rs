//! Le diagrams built from Grassmann necklaces.
//!
//! The labels `1..n` run along the southeast border starting at the top-right
//! corner: a label in `I_1` is a vertical step and names a row, any other
//! label is a horizontal step and names a column. Row `r` therefore holds the
//! cells `(r, c)` for every column label `c > r`, with larger labels further
//! left. Cells are always addressed by `(row_label, column_label)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::necklace::{grassmann_necklace, GrassmannNecklace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Plus,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeDiagram {
    n: usize,
    row_labels: Vec<usize>,
    column_labels: Vec<usize>,
    cells: BTreeMap<(usize, usize), Cell>,
}

impl LeDiagram {
    /// Empty-filled (all `Zero`) diagram whose rows are labelled by `rows`.
    pub fn with_rows(n: usize, rows: &BTreeSet<usize>) -> Result<Self> {
        if let Some(&bad) = rows.iter().find(|&&r| r == 0 || r > n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        let row_labels: Vec<usize> = rows.iter().copied().collect();
        let column_labels: Vec<usize> = (1..=n).rev().filter(|c| !rows.contains(c)).collect();
        let mut cells = BTreeMap::new();
        for &r in &row_labels {
            for &c in column_labels.iter().filter(|&&c| c > r) {
                cells.insert((r, c), Cell::Zero);
            }
        }
        Ok(LeDiagram {
            n,
            row_labels,
            column_labels,
            cells,
        })
    }

    /// Build from explicit rows, each listed left to right.
    pub fn from_rows(n: usize, rows: &BTreeSet<usize>, filling: &[Vec<Cell>]) -> Result<Self> {
        let mut d = LeDiagram::with_rows(n, rows)?;
        if filling.len() != d.row_labels.len() {
            return Err(Error::SizeMismatch(filling.len(), d.row_labels.len()));
        }
        let shape = d.shape();
        for (idx, (row, cells)) in d.row_labels.clone().iter().zip(filling).enumerate() {
            if cells.len() != shape[idx] {
                return Err(Error::SizeMismatch(cells.len(), shape[idx]));
            }
            for (col, cell) in d.row_columns(*row).into_iter().zip(cells) {
                d.cells.insert((*row, col), *cell);
            }
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.row_labels.len()
    }

    /// Row labels, top to bottom.
    pub fn row_labels(&self) -> &[usize] {
        &self.row_labels
    }

    /// Column labels, left to right.
    pub fn column_labels(&self) -> &[usize] {
        &self.column_labels
    }

    /// Column labels present in row `r`, left to right.
    pub fn row_columns(&self, r: usize) -> Vec<usize> {
        self.column_labels
            .iter()
            .copied()
            .filter(|&c| c > r)
            .collect()
    }

    /// Row lengths, top to bottom (weakly decreasing).
    pub fn shape(&self) -> Vec<usize> {
        self.row_labels
            .iter()
            .map(|&r| self.row_columns(r).len())
            .collect()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<Cell> {
        self.cells.get(&(row, col)).copied()
    }

    pub fn set_plus(&mut self, row: usize, col: usize) -> Result<()> {
        match self.cells.get_mut(&(row, col)) {
            Some(cell) => {
                *cell = Cell::Plus;
                Ok(())
            }
            None => Err(Error::CellOutsideShape { row, col }),
        }
    }

    pub fn plus_cells(&self) -> Vec<(usize, usize)> {
        self.cells
            .iter()
            .filter(|(_, &c)| c == Cell::Plus)
            .map(|(&rc, _)| rc)
            .collect()
    }

    pub fn plus_count(&self) -> usize {
        self.cells.values().filter(|&&c| c == Cell::Plus).count()
    }

    /// Every `0` has only `0`s to its left or only `0`s above it.
    pub fn is_le(&self) -> bool {
        self.cells.iter().all(|(&(r, c), &cell)| {
            if cell == Cell::Plus {
                return true;
            }
            let left_clear = self
                .cells
                .range((r, c + 1)..=(r, usize::MAX))
                .all(|(_, &x)| x == Cell::Zero);
            let above_clear = self
                .row_labels
                .iter()
                .take_while(|&&r2| r2 < r)
                .all(|&r2| self.get(r2, c) != Some(Cell::Plus));
            left_clear || above_clear
        })
    }

    /// Grid of `+` and `0` with column labels on top and row labels on the
    /// right.
    pub fn render_ascii(&self) -> String {
        let width = self.n.to_string().len();
        let mut out = String::new();
        for c in &self.column_labels {
            let _ = write!(out, "{c:>width$} ");
        }
        out.push('\n');
        for &r in &self.row_labels {
            for c in self.row_columns(r) {
                let mark = match self.cells[&(r, c)] {
                    Cell::Plus => '+',
                    Cell::Zero => '0',
                };
                let _ = write!(out, "{mark:>width$} ");
            }
            let pad = (self.column_labels.len() - self.row_columns(r).len()) * (width + 1);
            let _ = writeln!(out, "{:pad$}| {r}", "");
        }
        out
    }

    pub fn to_json(&self) -> LeJson {
        LeJson {
            n: self.n,
            k: self.k(),
            row_labels: self.row_labels.clone(),
            column_labels: self.column_labels.clone(),
            shape: self.shape(),
            plus_cells: self.plus_cells().into_iter().map(|(r, c)| [r, c]).collect(),
        }
    }
}

/// `{"row_labels":[…], "shape":[…], "plus_cells":[[row, col],…]}` plus the
/// sizes and column labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeJson {
    pub n: usize,
    pub k: usize,
    pub row_labels: Vec<usize>,
    pub column_labels: Vec<usize>,
    pub shape: Vec<usize>,
    pub plus_cells: Vec<[usize; 2]>,
}

impl TryFrom<LeJson> for LeDiagram {
    type Error = Error;

    fn try_from(value: LeJson) -> Result<Self> {
        let rows: BTreeSet<usize> = value.row_labels.iter().copied().collect();
        let mut d = LeDiagram::with_rows(value.n, &rows)?;
        if d.shape() != value.shape {
            return Err(Error::SizeMismatch(d.shape().len(), value.shape.len()));
        }
        for [r, c] in value.plus_cells {
            d.set_plus(r, c)?;
        }
        Ok(d)
    }
}

/// For each `i` in `2..=n`, the pairs `(a_m, b_m)` obtained by listing
/// `I_1 \ I_i` in decreasing and `I_i \ I_1` in increasing order.
pub fn plus_paths(neck: &GrassmannNecklace) -> Vec<Vec<(usize, usize)>> {
    let first = neck.term(1);
    (2..=neck.n())
        .map(|i| {
            let term = neck.term(i);
            let mut a: Vec<usize> = first.difference(term).copied().collect();
            a.reverse();
            let b: Vec<usize> = term.difference(first).copied().collect();
            a.into_iter().zip(b).collect()
        })
        .collect()
}

pub fn le_from_necklace(neck: &GrassmannNecklace) -> Result<LeDiagram> {
    let mut d = LeDiagram::with_rows(neck.n(), neck.term(1))?;
    for path in plus_paths(neck) {
        for (a, b) in path {
            d.set_plus(a, b)?;
        }
    }
    Ok(d)
}

pub fn validate_le(d: &LeDiagram) -> bool {
    d.is_le()
}

pub fn plus_count(d: &LeDiagram) -> usize {
    d.plus_count()
}

/// Plus count of the Le diagram of `w`'s necklace.
pub fn dimension(w: &Diagram) -> Result<usize> {
    let neck = grassmann_necklace(w)?;
    Ok(le_from_necklace(&neck)?.plus_count())
}
