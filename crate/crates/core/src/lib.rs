//! Finite-dimensional bosonic de Finetti toolkit.
//!
//! The crate works on the symmetric space of `N` bosons in `d` modes and
//! provides:
//!
//! - [`fock`]: occupation basis, Hartree vectors, creation/annihilation
//!   operators and full-tensor oracles;
//! - [`states`]: test-state factories;
//! - [`rdm`]: reduced `k`-body density matrices;
//! - [`ckmr`]: the lower-symbol (Husimi) de Finetti measure and the
//!   approximating `k`-body matrices by three independent routes;
//! - [`wick`]: exact single-mode normal ordering and Laguerre identities;
//! - [`tomography`]: reconstruction of a `k`-body operator from its
//!   Hartree expectations;
//! - [`metrics`]: Hermitian eigensolver, trace distance and the explicit
//!   error bounds.

pub mod ckmr;
pub mod error;
pub mod exact;
pub mod family;
pub mod fock;
pub mod metrics;
pub mod rdm;
pub mod rng;
pub mod states;
pub mod tomography;
pub mod wick;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Largest entrywise modulus of a complex slice difference.
pub fn max_abs_diff<'a>(a: impl IntoIterator<Item = &'a C64>, b: impl IntoIterator<Item = &'a C64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
