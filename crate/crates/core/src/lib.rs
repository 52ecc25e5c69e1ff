//! Error analysis of RIS-assisted space shift keying (SSK) and its
//! reflection-phase-modulated extension (SSK-RPM) under transceiver
//! hardware impairments and Nakagami-m fading, detected greedily.
//!
//! The crate provides closed-form pairwise and average error
//! probabilities with their asymptotic limits, an exact Monte-Carlo
//! simulator of the link, a surrogate simulator of the underlying
//! quadratic form, and independent numerical oracles.

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod error;
pub mod linkmodel;
pub mod montecarlo;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
