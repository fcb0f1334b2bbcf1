//! Strong-field single and double ionization of H₂ with nuclear wave packets.
//!
//! PPT ionization rates drive population transfer between a neutral H₂ packet and the
//! coupled 1sσg / 2pσu packets of H₂⁺, which are propagated with a split-operator scheme.
//! Coulomb-explosion and dissociation kinetic-energy spectra are accumulated along the way.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod config;
pub mod dressed;
pub mod error;
pub mod field;
pub mod grid;
pub mod molecular;
pub mod output;
pub mod propagator;
pub mod rates;
pub mod scenario;
pub mod spectra;
pub mod units;

pub use error::{Error, Result};
