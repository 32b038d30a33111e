//! Generalized Swanson Hamiltonians H = 𝒜†𝒜 + α𝒜² + β𝒜†² built from a
//! superpotential W, their Hermitian partners h = ρHρ⁻¹, closed-form spectra
//! of the Rosen-Morse I/II and harmonic families, and finite-difference
//! checks of every operator identity.

pub mod analytic;
pub mod error;
pub mod exact;
pub mod operators;
pub mod params;
pub mod specfun;
pub mod superpotential;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
