//! Quantum simulation of active-space electronic Hamiltonians for tautomer
//! stability prediction.
//!
//! The library covers the full pipeline from electron-integral files to
//! relative ground-state energies:
//!
//! - [`fermion`] — FCIDUMP ingestion, frozen-core reduction, active-space
//!   selection and candidate ranking.
//! - [`configspace`] — symmetry-sector configuration enumeration and the
//!   encoding map to qubit basis states.
//! - [`pauli`] — exact Pauli-string algebra with dense matrix realization.
//! - [`encode`] — Jordan-Wigner and qubit-efficient (configuration-space)
//!   encodings of second-quantized Hamiltonians.
//! - [`circuit`] — hardware-efficient ansatz circuits and exact statevector
//!   simulation.
//! - [`noise`] — thermal-relaxation channels and density-matrix simulation.
//! - [`vqe`] — variational ground-state search with parameter-shift
//!   gradients and a quasi-Newton minimizer.
//! - [`oracle`] — exact-diagonalization references and sector projections.
//! - [`synthetic`] — seeded random integral tables for tests, benchmarks,
//!   and demos.

pub mod circuit;
pub mod configspace;
pub mod encode;
pub mod error;
pub mod fermion;
pub mod noise;
pub mod oracle;
pub mod parallel;
pub mod pauli;
pub mod synthetic;
pub mod units;
pub mod vqe;

pub use error::{Error, Result};
