//! Exact-diagonalization toolkit for quench dynamics of the
//! Lipkin-Meshkov-Glick model.
//!
//! The crate follows one observable chain: collective spin operators
//! ([`spinops`]) feed the LMG Hamiltonian and its eigendecomposition
//! ([`spectral`]); quenches are evolved exactly in that eigenbasis to give
//! Loschmidt amplitudes and finite-size rate functions ([`dynamics`]); state
//! distances turn the evolution into Bures angles ([`geometry`]); and the
//! variational binary relative entropy `s(x)` converts angles into a lower
//! bound on entropy production ([`entropy`]). [`harness`] drives parameter
//! sweeps and writes CSV/JSON output.

pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod spectral;
pub mod spinops;

pub use error::{Error, Result};
