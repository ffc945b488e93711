//! Exact jet-level computations with Lie supergroups, coset supermanifolds
//! `G/H`, stabilizer subsupergroups and equivariant isomorphisms.
//!
//! All arithmetic happens over the Gaussian rationals, so every identity is
//! checked by exact equality of canonical forms.

pub mod action;
pub mod coset;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod group;
pub mod ideal;
pub mod linalg;
mod named;
pub mod reduced;
pub mod residual;
pub mod scalar;
pub mod superalg;

pub use error::{Error, Result};
pub use geometry::{compose, Morphism, ProductChart, TangentMap};
pub use group::{LieSupergroup, Side, Subsupergroup};
pub use named::NamedList;
pub use reduced::solve_reduced;
pub use residual::{Report, Residual};
pub use scalar::Scalar;
pub use superalg::{ChartSignature, Coord, Jet, Monomial, Parity, SuperPolynomial, TermRepr};
