//! Explicit exponential bases on unions of intervals.
//!
//! The crate builds the star-perturbed frequency sets `n + δ*ₙ`, the split
//! domains they live on, and certifies Riesz-basis behaviour numerically:
//! closed-form Gram matrices, finite-section eigenvalue bounds, transport
//! identities between split and unsplit domains, and the closed-form
//! stability constants (Kadec, Balan-type radius, m-segment criterion).
//!
//! Modules:
//! - [`sequences`]: `δ*ₙ`, frequency sets and their diagnostics.
//! - [`domains`]: split intervals, complements, split cubes.
//! - [`frame_analysis`]: Gram matrices, eigenvalues, frame-bound series.
//! - [`stability`]: perturbation constants and criteria.
//! - [`tensor`]: product frequency sets and Kronecker Gram matrices.

pub mod domains;
pub mod error;
pub mod frame_analysis;
pub mod rational;
pub mod sequences;
pub mod stability;
pub mod tensor;

pub use error::{Error, Result};
pub use rational::Rational;
