//! Special-function kernel: Laguerre polynomials, the Airy function and its
//! zeros, and Gauss–Laguerre quadrature on `[0, ∞)`.
//!
//! Plain double precision throughout, no external math library.

mod airy;
mod laguerre;
mod quadrature;

pub use airy::{airy_ai, airy_zero};
pub use laguerre::{laguerre, laguerre_derivative, laguerre_pair};
pub use quadrature::{gauss_laguerre, integrate_semiinfinite, QuadratureRule, MAX_GAUSS_LAGUERRE_ORDER};
