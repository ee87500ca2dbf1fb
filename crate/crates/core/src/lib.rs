//! Generalized eigenfunctions of the 2D relativistic Schrodinger operator
//! sqrt(-Laplacian) + V via the Lippmann-Schwinger integral equation.
//!
//! The crate is organized along the pipeline:
//! special functions ([`specfun`]) -> resolvent kernels ([`kernel`]) ->
//! potential models ([`potential`]) and quadrature ([`quadrature`]) ->
//! the dense Nystrom solver ([`solver`]) -> far-field extraction
//! ([`farfield`]) and decay-rate verification ([`verify`]).

pub mod accept;
pub mod config;
pub mod error;
pub mod farfield;
pub mod integrate;
pub mod kernel;
pub mod potential;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::SignChoice;
pub use potential::{PotentialKind, PotentialModel};
pub use quadrature::QuadratureGrid;
pub use solver::{ScatteringField, WaveVector};
