//! Wilson loop diagrams: admissibility, Grassmann necklaces, positroids,
//! Le diagrams and the symbolic denominators of their integrands.

pub mod configs;
pub mod denominator;
pub mod diagram;
pub mod enumerate;
pub mod error;
pub mod le;
pub mod matroid;
pub mod necklace;
pub mod selftest;
pub mod sympoly;

pub use diagram::{AdmissibilityReport, Diagram, DirectedPropagator, Propagator, Violation};
pub use error::{Error, Result};
pub use le::LeDiagram;
pub use necklace::{grassmann_necklace, GrassmannNecklace};
pub use sympoly::{FactoredPolynomial, SparsePolynomial, SymbolicMatrix, Variable};
