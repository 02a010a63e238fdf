//! Numerics for the standard V-monotone Gaussian measure.
//!
//! The measure is computed by three independent routes that the crate
//! cross-checks against each other:
//!
//! * exact rational moments from a polynomial recursion ([`moments`]),
//! * the reciprocal Cauchy-Stieltjes transform `F` and the transform
//!   `G = 1/F` on the closed upper half-plane ([`transform`]), built from
//!   the analytic continuation machinery in [`real`] and [`geometry`],
//! * the density on the compact support `[-sqrt(2 + gamma0), sqrt(2 + gamma0)]`
//!   by boundary values and by a parametric sweep ([`density`]).
//!
//! The [`verify`] module bundles the cross-checks into a reportable
//! checklist; the `vmg` binary exposes everything on the command line.

// negated comparisons in domain guards are deliberate: they reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod geometry;
pub mod moments;
pub mod quad;
pub mod real;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};

/// A point of the complex plane in 53-bit binary floating point.
pub type PlanePoint = num_complex::Complex64;
