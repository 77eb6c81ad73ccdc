//! Exact graded commutative algebra over prime fields: Gröbner bases for
//! submodules of graded free modules, Koszul homology, j-transforms of
//! associated graded modules, and local cohomology lengths via graded duality.
//!
//! Everything is computed over a standard graded polynomial ring S = k[x₁..xₙ];
//! modules over R = S/a are subquotients V/U with a·F ⊆ U.

#![no_std]

extern crate alloc;

pub mod error;
pub mod expr;
pub mod field;
pub(crate) mod gb;
pub mod jtransform;
pub mod koszul;
pub mod localcohom;
pub mod monomial;
pub mod ops;
pub mod poly;
pub mod ring;
pub mod series;
pub mod structure;
pub mod submodule;
pub mod vector;

pub use error::{Error, Result};
pub use field::Field;
pub use monomial::{Monomial, OrderTag};
pub use poly::{Poly, PolyCtx};
pub use ring::{Caps, Ring};
pub use series::{GradedSeries, Length};
pub use submodule::{Module, Submodule};
pub use vector::FreeVector;
