//! Supersymmetric factorization of 1-D Schrödinger operators and the strictly
//! isospectral potential families built from their general zero modes.
//!
//! Units are `ħ = 2m = 1`, so every Hamiltonian reads `H = −D² + V(x)`.
//! Start from [`spectral::ground_state`] to get the zero mode `u` and the
//! energy-shifted potential, then feed them to [`susy`], [`isospectral`] and
//! [`riccati`].

pub mod catalog;
pub mod error;
pub mod grid;
pub mod isospectral;
pub mod riccati;
pub mod spectral;
pub mod susy;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::{Grid1D, GridFunction, IntegralOrigin};
pub use spectral::ZeroMode;
