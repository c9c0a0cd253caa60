//! Bearings-only target motion analysis.
//!
//! Reconstructs the 2-D trajectory of a possibly maneuvering target from
//! noisy bearings taken by a moving observer whose position is known. The
//! target coordinates are modeled as orthogonal-polynomial series in time
//! (N-Polynomials) and fitted by least squares; the classical
//! uniform-rectilinear N-Bearings fit is provided as a baseline, together
//! with a seeded Monte Carlo harness for comparing the two.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod evaluation;
pub mod kinematics;
pub mod polybasis;
pub mod sensing;

pub use error::{Error, Result};
