//! Mixed-norm tensor arithmetic, exponent interpolation, Bohnenblust–Hille
//! type constants and randomized certification of the inequalities behind
//! them on concrete multilinear forms over finite sections of `c0`.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`] holds the dense coefficient arrays and exponent bookkeeping.
//! - [`mixed_norms`] evaluates nested `l_{p1,...,pm}` norms and the two sides
//!   of the Minkowski and Blei inequalities.
//! - [`interpolation`] finds convex weights in reciprocal-exponent space and
//!   checks the resulting product bound.
//! - [`constants`] evaluates Khinchine constants, the `omega`/`f` exponent
//!   calculus and the constants `C_{m,t}`.
//! - [`forms_lab`] works with concrete forms: sup norms, weak `l1` norms,
//!   summing-norm lower bounds and Monte Carlo Khinchine checks.
//! - [`campaign`] wraps everything into seeded fuzz campaigns with JSON reports.

pub mod campaign;
pub mod constants;
pub mod error;
pub mod format;
pub mod forms_lab;
pub mod interpolation;
pub mod mixed_norms;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{ExponentVector, Field, OrderedPartition, Tensor};

/// Relative slack allowed when asserting that an inequality holds.
pub const INEQUALITY_REL_TOL: f64 = 1e-10;
