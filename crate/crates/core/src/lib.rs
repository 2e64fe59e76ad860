//! Achievable rate-distortion regions for a state-dependent wiretap channel
//! in which the legitimate receiver also estimates the channel state, and
//! the message and (a noisy version of) the state must stay hidden from an
//! eavesdropper.
//!
//! - [`gauss`]: exact covariance algebra and the scalar Gaussian example,
//!   including a frontier search over its auxiliary parameters.
//! - [`dmc`]: the same bounds for finite alphabets, from exact joint tables.
//! - [`fme`]: Fourier–Motzkin elimination, used to project the coding
//!   scheme's rate conditions onto the message rate.
//! - [`sim`]: a small Monte-Carlo realization of the superposition /
//!   likelihood-encoder scheme with exact leakage computation.
//! - [`files`]: JSON schemas for scenario, auxiliary and experiment files.
//!
//! All information quantities are in nats.

pub mod dmc;
pub mod error;
pub mod files;
pub mod fme;
pub mod frontier;
pub mod gauss;
pub mod region;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use region::{RateTerms, SecrecyMode};
