//! Quaternionic scalar field toolkit.
//!
//! The crate is `no_std` and only needs an allocator. It covers:
//!
//! * [`quaternion`]: Hamilton algebra and the symplectic `z0 + z1 j` view.
//! * [`four_vector`], [`classical`]: Minkowski kinematics and classical plane
//!   waves with their momentum constraints and finite-difference residuals.
//! * [`lattice`]: free evolution of the four complex component fields on a
//!   periodic 1+1D lattice.
//! * [`sparse`], [`fock`]: truncated bosonic Fock spaces, ladder operators,
//!   energy and charge operators for the four- and two-component schemes.
//! * [`field`]: operator-valued mode expansions, conjugate momenta and the
//!   reconstruction of the classical wave from quantized components.
//! * [`symbolic`]: a free-algebra rewrite engine for associator identities.
//!
//! The metric signature is `(+, −, −, −)` throughout.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classical;
pub mod convention;
pub mod field;
pub mod fock;
pub mod four_vector;
pub mod lattice;
pub mod quaternion;
pub mod sparse;
pub mod symbolic;

pub use classical::{ConstraintReport, PlaneWaveSpec, Sign};
pub use convention::Convention;
pub use four_vector::FourVector;
pub use num_complex::Complex64;
pub use quaternion::{Quaternion, SymplecticPair};
