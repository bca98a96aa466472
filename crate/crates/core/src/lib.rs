//! Vibronic and pseudospin properties of Kramers-doublet point defects.
//!
//! The pipeline runs from tabulated adiabatic-surface energies to observable
//! spin quantities:
//!
//! 1. [`apes`] turns `(E_JT, δ_JT, ħω)` into the couplings `(F, G)` of the
//!    quadratic E⊗e Hamiltonian,
//! 2. [`vibronic`] diagonalizes that Hamiltonian and extracts the Ham
//!    reduction factor `p` of the ground vibronic doublet,
//! 3. [`pseudospin`] applies `p` to the spin-orbit splitting and the orbital
//!    angular momentum to obtain the g tensor and spin spectra.
//!
//! [`catalog`] holds the per-defect inputs.

pub mod apes;
pub mod catalog;
pub mod eigen;
pub mod error;
pub mod pseudospin;
pub mod units;
pub mod vibronic;

pub use apes::{coupling_from_apes, coupling_from_energies, trivial_points, JTCoupling};
pub use catalog::{load_catalog, Catalog, DefectParams};
pub use error::{Error, Result};
pub use vibronic::{solve, VibronicSolution};
