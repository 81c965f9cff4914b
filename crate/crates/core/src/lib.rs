//! Theta characteristics, Riemann theta functions with characteristics, and numerical
//! verification of the Riemann-Jacobi formula and Weber's bitangent formula in genus 3.

// `!(x < tol)` is deliberate: a NaN residual has to fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chars;
pub mod error;
pub mod theta;
pub mod weber;

pub use error::{Error, Result};
