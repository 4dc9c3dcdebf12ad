//! Lorentz-space functionals computed exactly on piecewise-monomial functions
//! over the half-line.
//!
//! The crate is organised around a handful of closed-form kernels:
//!
//! - [`functions`]: step and monomial functions, rearrangement, `f**`, and
//!   Hardy–Littlewood–Pólya precedence.
//! - [`norms`]: exponent arithmetic, `||f||_{p,s}` and the maximal norm.
//! - [`level`]: the level function with respect to `t^{-alpha}`.
//! - [`duality`]: the Köthe dual norm and its optimizing witness.
//! - [`decomposition`]: the matrix permutation lemma and constructive
//!   upper bounds for the decomposition norm.
//! - [`suite`]: the seeded property registry behind `lorentz verify`.

pub mod corpus;
pub mod decomposition;
pub mod duality;
pub mod error;
pub mod functions;
pub mod level;
pub mod norms;
pub mod quadrature;
pub mod suite;

pub use error::{Error, Result};
pub use functions::{Function, MonomialFunction, MonomialPiece, StepFunction, StepPiece};
pub use norms::{Exponents, NormValue, SecondIndex};
