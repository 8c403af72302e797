//! Exact simulation of pure-dephasing models in which a central system couples
//! to one optional unobserved environment and any number of observed
//! environments, together with diagnostics that decide whether the joint state
//! has reached a spectrum broadcast structure (SBS).
//!
//! The crate is `no_std` and only needs `alloc`. Everything is a pure function
//! of its inputs; matrices are immutable values.
//!
//! Layout of the crate:
//!
//! * [`matrix`] – dense complex matrices, tensor products, partial trace and
//!   partial transpose.
//! * [`linalg`] – Hermitian eigendecomposition and the spectral functions built
//!   on it (unitary exponential, PSD square root, trace norm, generalized
//!   overlap, support projectors, purity).
//! * [`model`] – the dephasing Hamiltonian, initial states and builders.
//! * [`dynamics`] – conditional unitaries, decoherence factors and the joint
//!   state at time `t`.
//! * [`diagnostics`] – orthogonality, separability, Negativity, purity and
//!   rank bounds, and the aggregate SBS verdict.
//! * [`oracle`] – independent brute-force cross-checks.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod oracle;

pub use error::{EnvId, Error, Result};
pub use matrix::{ComplexMatrix, FactorLayout, C64};

/// Largest total Hilbert-space dimension the dense routines accept.
pub const DESK_SCALE_CAP: usize = 4096;

/// Largest total dimension for the brute-force oracle.
pub const ORACLE_SCALE_CAP: usize = 256;
