//! Exact diagonalization of swap-kicked, disordered long-range spin chains.
//!
//! The Floquet operator `U_F = exp(-iK) exp(-iH_int)` is built in a fixed
//! magnetization sector of a spin-1/2 or spin-1 chain, diagonalized densely,
//! and analysed through period-doubling dynamics, decay times, level
//! statistics, pi-pairing of quasienergies, spin correlations and the local
//! imbalance.

pub mod basis;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod imbalance;
pub mod solvable;
pub mod spectral;

#[cfg(feature = "harness")]
pub mod harness;

pub use basis::{enumerate_sector, LocalSpin, SectorBasis, SpinConfig};
pub use dynamics::{evolve, InitialState, ObservableTrace, Propagator};
pub use error::{Error, Result};
pub use hamiltonian::{build_floquet, draw_disorder, DisorderRealization, FloquetOperator, ModelParams};
pub use spectral::{diagonalize, FloquetSpectrum, PairingGaps};
