//! Simulation toolkit for the transverse-field cluster model
//! `H(B) = -sum_mu (K_mu + B X_mu)` with `K_mu = X_mu prod_{nu~mu} Z_nu`.
//!
//! The crate is organised bottom-up:
//!
//! * [`pauli`] exact symbolic Pauli algebra and canonical (Clifford) maps,
//! * [`lattice`] lines and open square lattices with their two-colouring,
//! * [`model`] Hamiltonians, duality maps and order-parameter strings,
//! * [`exact`] matrix-free exact diagonalization,
//! * [`fermion`] free-fermion solution of the open transverse-field Ising chain,
//! * [`mbqc`] measurement-pattern simulation and gate fidelities,
//! * [`cli`] the `tfcm` command-line front end.

pub mod cli;
pub mod error;
pub mod exact;
pub mod fermion;
mod gf2;
pub mod lattice;
pub mod mbqc;
pub mod model;
pub mod pauli;

pub use error::{Error, Result};
