//! Exact sparse polynomials over the integers in the entries `x_{P,V}` of
//! the symbolic matrix `C(W)`, and determinants of its minors.

mod factored;
mod matrix;
mod poly;

pub use factored::{FactorJson, FactoredJson, FactoredPolynomial};
pub use matrix::{c_matrix, c_matrix_default, MatrixJson, SymbolicMatrix};
pub use poly::{Monomial, SparsePolynomial, Variable};
