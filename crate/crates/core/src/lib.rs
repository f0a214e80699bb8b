//! Quantum mechanics of a free particle seen from a uniformly accelerated
//! (Rindler) frame, kept to next-to-leading order in `1/c²`.
//!
//! The crate computes the oscillator-like Rindler spectrum and its
//! noncommutative ground-state shift. It checks both against independent
//! numerical routes: a Sturm–Liouville finite-difference solver, truncated
//! matrix representations of the Heisenberg algebra, Gauss–Laguerre
//! quadrature, and classical trajectory integration. It also contrasts the
//! Rindler levels with the Airy-zero levels of a particle in a uniform
//! gravitational field.
//!
//! Module map:
//!
//! * [`params`]: physical inputs, derived constants, coordinate maps
//! * [`specfun`]: Laguerre polynomials, Airy function and zeros, quadrature
//! * [`algebra`]: Weyl ordering and Bopp shift on truncated oscillator bases
//! * [`spectrum`]: analytic levels and eigenfunctions
//! * [`solver`]: finite-difference Sturm–Liouville solver
//! * [`gravity`]: quantum bouncer and the equivalence-principle comparison
//! * [`nc_shift`]: noncommutative first-order ground-state shift
//! * [`classical`]: Hamilton's equations and effective accelerations
//! * [`cli`]: configuration and report writers behind the `rindler` binary

pub mod algebra;
pub mod classical;
pub mod cli;
mod error;
pub mod gravity;
pub mod nc_shift;
pub mod params;
pub mod solver;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use params::{CoordinateMaps, DerivedConstants, PhysicalParams};
