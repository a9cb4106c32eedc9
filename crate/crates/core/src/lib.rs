//! Simultaneous Fourier-Laplace double transforms for spherically symmetric
//! functions in `d` dimensions.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: Bessel and Gamma functions, adaptive, semi-infinite and
//!   oscillatory quadrature.
//! * [`radial_fourier`]: sphere measures, the averaged ballistic kernel and
//!   numerical radial Fourier transforms.
//! * [`laplace`]: numerical forward Laplace transforms and Talbot inversion.
//! * [`pairs`]: the registry of double-transform pairs, the Efros composition
//!   and the catalog of test originals.
//! * [`verify`]: mixed-domain verification of the registry.
//! * [`rte2d`]: the closed-form solution of two-dimensional isotropic
//!   radiative transfer.

pub mod error;
pub mod laplace;
pub mod numerics;
pub mod pairs;
pub mod radial_fourier;
pub mod rte2d;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
