//! Verification toolkit for residuated and Girard structures and
//! orthomodular lattices.
//!
//! The finite engines ([`order`], [`ortho`], [`residuation`], [`girard`],
//! [`search`]) work on explicit tables over element indices. The
//! [`subspace`] engine realises the lattice of subspaces of `R^n` as a
//! commutative Girard quantale and is generic over the floating point type.

pub mod girard;
pub mod io;
pub mod order;
pub mod ortho;
pub mod report;
pub mod residuation;
pub mod scalar;
pub mod search;
pub mod subspace;
pub mod zoo;

pub use order::{FiniteLattice, FinitePoset, UnaryOrderMap};
pub use ortho::OrthoLattice;
pub use report::{LawReport, Verdict, Witness};
pub use residuation::{MulTable, ResiduatedStructure};
pub use scalar::Scalar;
pub use subspace::{QuantaleContext, Subspace};

/// Exact values of the finite chains.
pub type Rational = num_rational::Ratio<i64>;

pub type Subspace64 = Subspace<f64>;
pub type Subspace32 = Subspace<f32>;
pub type Context64 = QuantaleContext<f64>;
pub type Context32 = QuantaleContext<f32>;
