//! Solver and regularity diagnostics for the forced surface growth equation on the torus.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod inequalities;
pub mod quantities;
pub mod regularity;
pub mod solver;

pub use error::{Error, Result};
