//! Exact computations with the top local cohomology `H^n_I(R/fR)` of a
//! hypersurface in `R = T[x_1..x_n]`, `I = (x_1..x_n)`, over a graded
//! coefficient ring `T`: graded pieces, socles, graded (`*`) socles, and the
//! determinantal annihilators of the bidiagonal family `A_n`.
//!
//! Everything reduces to linear algebra over a prime field (or the rationals)
//! one graded component at a time.

pub mod annihilator;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod ring;
pub mod scenarios;
pub mod socle;
pub mod toplc;

pub use error::{Error, ParseError, Result};
pub use field::{Backend, Field, FieldScalar, PrimeField, RationalField};
pub use ring::{CoeffPoly, CoeffRing, Monomial, RingBackend, RingDescriptor};
pub use toplc::{HypersurfaceF, InverseMonomial};
