//! Graded-commutative polynomial algebra over exact rationals.

pub mod poly;
pub mod registry;
pub mod var;

pub use poly::{GradedPoly, Monomial};
pub use registry::{ParitySpec, Registry, SymbolDecl, SymbolKind, Symmetry};
pub use var::{JetSpace, MultiIndex, SymId, Var};
