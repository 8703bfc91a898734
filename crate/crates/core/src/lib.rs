//! KS-class norms, free-resolvent kernels and Birman-Schwinger
//! eigenvalue enclosures for Schrödinger operators with complex potentials.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod branch;
pub mod bs;
pub mod corpus;
pub mod dyadic;
pub mod enclosure;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod norms;
pub mod potential;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod toeplitz;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type SpectralPoint64 = branch::SpectralPoint<f64>;
pub type SpectralPoint32 = branch::SpectralPoint<f32>;
pub type PotentialSpec64 = potential::PotentialSpec<f64>;
pub type PotentialSpec32 = potential::PotentialSpec<f32>;
pub type Grid64 = grid::Grid<f64>;
pub type Grid32 = grid::Grid<f32>;
pub type NormRequest64 = norms::NormRequest<f64>;
pub type NormRequest32 = norms::NormRequest<f32>;
pub type NormResult64 = norms::NormResult<f64>;
pub type NormResult32 = norms::NormResult<f32>;
pub type BsMatrix64 = bs::BsMatrix<f64>;
pub type BsMatrix32 = bs::BsMatrix<f32>;
pub type ScanResult64 = bs::ScanResult<f64>;
pub type ScanResult32 = bs::ScanResult<f32>;
pub type EnclosureReport64 = enclosure::EnclosureReport<f64>;
pub type EnclosureReport32 = enclosure::EnclosureReport<f32>;
