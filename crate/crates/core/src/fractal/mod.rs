//! The limit space of the Hanoi group on `k` pegs as an attractor in
//! `R^{k-1}`, its harmonic structure and dimensions.

pub mod dims;
pub mod energy;
pub mod geometry;

pub use dims::{hausdorff_dimension, spectral_dimension};
pub use energy::{renormalize, HarmonicStructure, LevelGraph};
pub use geometry::{build_ifs, build_simplex, Address, AffineIfs, AffineMap, SimplexGeometry};
