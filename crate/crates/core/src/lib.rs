//! Perfect transfer of many-particle states between the ends of a
//! sender–wire–receiver tight-binding chain of free fermions or bosons.
//!
//! The single-particle problem is a tridiagonal matrix; the many-particle
//! transfer probability is the squared determinant (fermions) or permanent
//! (bosons) of the sender-to-receiver block of the single-particle
//! propagator.

pub mod amplitudes;
pub mod chain;
mod error;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod perturbation;
pub mod resonance;
pub mod spectral;
pub mod validation;

pub use chain::{ChainSpec, Statistics};
pub use error::{Error, Result};
