//! Numerical toolkit for the chordal Loewner equation driven by `λ(t) = t^{1/3}`.
//!
//! * [`series`]: exact coefficient families (singular, branch, holomorphic) and their
//!   substitution oracles.
//! * [`borel`]: Borel transform, Padé continuation and Laplace-integral summation.
//! * [`dynamics`]: adaptive flows, singular and branch solutions, slit traces.
//! * [`analysis`]: harmonic measures of the slit sides, ordering ladders, trace
//!   smoothness and convergence radii.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod borel;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod ode;
pub mod poly;
pub mod quad;
pub mod series;
pub mod sweep;
pub mod tail;

pub use error::{Error, Result};
