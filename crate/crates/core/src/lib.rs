//! Harmonic oscillator under the simultaneous non-Hermitian transformation
//! `x → (x + iλp)/√(1+λβ)`, `p → (p + iβx)/√(1+λβ)`.
//!
//! Choosing the free oscillator frequency so that one of the two band-2
//! couplings vanishes makes the Fock-space Hamiltonian triangular, every
//! Rayleigh–Schrödinger correction zero and the spectrum exactly `n + ½`.
//! The modules here build that Hamiltonian symbolically, run the perturbation
//! machinery at any frequency, construct the resulting wavefunction series and
//! check the whole picture against dense truncations and quadrature.

pub mod error;
pub mod fock_algebra;
pub mod hamiltonian;
pub mod lie_closed_form;
pub mod perturbation;
pub mod position_space;
pub mod spectral;

pub use error::{Error, Result};
pub use fock_algebra::LadderPolynomial;
pub use hamiltonian::{ModeDecomposition, TransformParams, ZeroBranch};
pub use perturbation::{PerturbationResult, SeriesBranch, WavefunctionSeries};
pub use spectral::{FockMatrix, StructureTag};
