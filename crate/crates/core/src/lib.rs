//! Spin-coupling and entanglement analysis for small spin systems.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It covers:
//!
//! * [`tensor`]: dense complex state vectors, Hermitian operators, Kronecker
//!   products, eigendecomposition and partial traces.
//! * [`spin`]: spin matrices for arbitrary `s`, the Cartesian photon
//!   polarization frame, and `g Σ sᵢ·sⱼ` interaction Hamiltonians.
//! * [`cg`] and [`coupling`]: exact Clebsch–Gordan coefficients and the
//!   coupled `|S' S M⟩` eigenbases of two- and three-spin systems, built both
//!   analytically and by simultaneous diagonalization.
//! * [`listing`] and [`errata`]: a plain-text amplitude listing format and the
//!   comparison of published listings against the analytic basis.
//! * [`entanglement`]: Schmidt decomposition, von Neumann entropy and
//!   per-particle separability.
//! * [`jc`]: the two-photon Jaynes–Cummings model in its two-level invariant
//!   subspace.
//! * [`spatial`]: exchange-symmetrized Gaussian packets tensored with a spin
//!   state, and entanglement versus separation.
//! * [`numfmt`]: the fixed-width float format used by text artifacts.
//!
//! Conventions: `ħ = 1`; subsystem 1 is the slowest-varying index of a product
//! basis; within each spin factor `m` runs from `+s` down to `-s`; all ladder
//! operators and Clebsch–Gordan coefficients follow Condon–Shortley.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cg;
pub mod coupling;
pub mod entanglement;
pub mod errata;
mod error;
mod half;
pub mod jc;
pub mod listing;
pub mod numfmt;
pub mod reference;
pub mod spatial;
pub mod spin;
pub mod tensor;

pub use error::{Error, Result};
pub use half::HalfInt;
pub use num_complex::Complex64 as C64;
