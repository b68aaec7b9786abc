//! Symbolic engine for Grassmann-graded Lagrangian field theory on jet
//! coordinates.

pub mod algebra;
pub mod check;
pub mod error;
pub mod gauge;
pub mod jet;
pub mod linsolve;
pub mod mutate;
pub mod noether;
pub mod parser;
pub mod rational;
pub mod report;
pub mod theories;
pub mod theory;
pub mod variational;

pub use algebra::{GradedPoly, JetSpace, Monomial, MultiIndex, Registry, Var};
pub use error::{Error, Result};
pub use rational::Q;
