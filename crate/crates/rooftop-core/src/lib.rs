//! Grid-based convex analysis: discrete Legendre transforms, convex
//! envelopes, rooftop obstacle problems, and weak geodesics between
//! convex endpoints.
//!
//! Everything operates on scalar fields sampled over uniform axes
//! ([`field::ScalarField`]). The crate is `no_std`-compatible (with
//! `alloc`); file formats and the command-line driver live in the
//! companion `rooftop-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod expr;
pub mod field;
pub mod fixtures;
pub mod geodesic;
pub mod legendre;
pub mod obstacle;
pub mod report;
pub mod rooftop;

pub use error::Error;
pub use field::{Axis, ScalarField};
pub use report::{CheckReport, CheckStatus};
