//! Tight-binding Dirac models on the dimer chain and the honeycomb lattice,
//! and the SL(2,ℂ) stabilizer group of their Dirac algebra.
//!
//! The crate builds the two-band Bloch Hamiltonians H = Δ α·Π + μβ + E₀,
//! applies similarity transformations S⁻¹HS that preserve the Clifford
//! relations of the quasi-spin matrices, and turns the transformed operators
//! back into real-space coupling tables:
//!
//! - compact (rotation) deformations give Hermitian lattices with second-
//!   and third-neighbour couplings and the unchanged dispersion;
//! - non-compact (boost) deformations give non-Hermitian, PT-symmetric
//!   lattices whose spectra remain real under the metric S†S.
//!
//! [`algebra`] holds the 2×2 machinery and the induced σ/γ actions,
//! [`lattice`] the models and coupling tables, [`stabilizer`] the deformed
//! tables and the Foldy–Wouthuysen diagonalization, [`realspace`] finite
//! lattice assembly with self-contained eigensolvers, [`ptsym`] the discrete
//! symmetry checks, and [`monolayer`] the MoS₂ parameter extraction and band
//! comparison.

pub mod algebra;
pub mod lattice;
pub mod matrix;
pub mod monolayer;
pub mod ptsym;
pub mod realspace;
pub mod rng;
pub mod serialize;
pub mod stabilizer;

pub use algebra::{
    conjugate, lorentz_action, pauli, sigma_action, GammaSet, StabilizerElement, StabilizerKind,
};
pub use lattice::{
    base_couplings, bloch_hamiltonian, dirac_points, dispersion, kinetic_of_k, mass_shell_residual,
    BandStructure, CouplingTable, Geometry, Hop, KineticVector, LatticeModel, Sublattice,
};
pub use matrix::{C2Matrix, ALG_TOL};
pub use monolayer::{
    band_comparison, high_symmetry_path, params_from_band_data, theta_from_gap_form,
    theta_from_overlap_ratio, ComparisonReport, MonolayerParams, ReferenceBands,
};
pub use ptsym::{metric_operator, pt_potential, pt_residual, spectral_reality_report};
pub use realspace::{
    assemble, bloch_spectrum_multiset, general_eigenvalues, hermitian_eigenvalues, Boundary,
    RealHamiltonian,
};
pub use stabilizer::{
    boosted_couplings, fw_transform, rotated_couplings, transform_bloch, FwAngles, TransformedModel,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("matrix is singular (|det| = {det_abs:.3e})")]
    SingularMatrix { det_abs: f64 },
    #[error("Pauli index {index} out of range 1..=3")]
    PauliIndex { index: usize },
    #[error("rotation axis must be nonzero")]
    ZeroAxis,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("eigensolver did not converge ({context})")]
    NoConvergence { context: String },
    #[error("eigenpair residual {value:.3e} exceeds bound {bound:.3e}")]
    ResidualTooLarge { value: f64, bound: f64 },
    #[error("invalid lattice extent: {0}")]
    BadExtent(String),
    #[error("matrix dimension {n} exceeds supported size {max}")]
    TooLarge { n: usize, max: usize },
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("invalid input: {0}")]
    InvalidParameter(String),
    #[error("reference data does not overlap the comparison window")]
    EmptyWindow,
}
