//! Exact-arithmetic toolkit for the arithmetic of first-order ODEs
//! y'(t) = f(t) y(t) with all-algebraic solutions.
//!
//! The library checks congruence systems on the coefficient sequence of f,
//! computes p-curvatures (truncated over F_p, or exactly for rational
//! functions), and recovers annihilating bivariate polynomials of algebraic
//! power series by exact linear algebra. Everything is exact: big integers,
//! big rationals, and residues mod p. No floating point anywhere.

pub mod arith;
pub mod congruence;
pub mod error;
pub mod formats;
pub mod guess;
pub mod pcurvature;
pub mod seqcore;
pub mod series;

pub use error::{Error, Result};
