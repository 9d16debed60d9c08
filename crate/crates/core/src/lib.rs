//! Exact loop decompositions of hitting-time generating functions for
//! walks on a line of sites, and the Bernoulli/Euler polynomial identities
//! that follow from them.
//!
//! The exact core works over arbitrary-precision rationals and truncated
//! power series. Floating point appears only in `montecarlo`.

pub mod cli;
pub mod error;
pub mod exact_core;
pub mod identities;
pub mod loop_engine;
pub mod models;
pub mod montecarlo;
pub mod report;
pub mod special_polys;
pub mod umbral;

pub use error::{Error, Result};
pub use report::VerificationReport;
