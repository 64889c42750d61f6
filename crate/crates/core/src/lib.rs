//! Spectral and symmetry analysis of chains of harmonic oscillators with
//! imaginary nearest-neighbour coupling,
//!
//! ```text
//! H(λ) = ½ Σ_j (p_j² + ω_j² x_j²) + λ Σ_j x_j x_{j+1},   λ = i·g,
//! ```
//!
//! in units with ħ = m = 1.
//!
//! The crate is organised bottom-up:
//!
//! * [`hamiltonian`]: the chain model, its quadratic form and the
//!   unperturbed level structure.
//! * [`linalg`]: dense complex eigensolver (balancing, Hessenberg reduction,
//!   shifted QR) used by every spectral computation.
//! * [`normalmodes`]: exact spectrum from complex normal-mode frequencies and
//!   the real / conjugate-pair classification of each level.
//! * [`focksolver`]: truncated Fock-basis matrix of `H(ig)` as an independent
//!   cross-check.
//! * [`symmetry`]: signed-permutation operators, antiunitary extensions and
//!   finite group closure / classification.
//! * [`perturbation`]: Rayleigh–Schrödinger series and first-order degenerate
//!   analysis used to predict which levels turn complex.
//! * [`phasescan`]: maps real / complex regions in parameter space and
//!   bisects their boundaries.

pub mod error;
pub mod focksolver;
pub mod hamiltonian;
pub mod linalg;
pub mod normalmodes;
pub mod perturbation;
pub mod phasescan;
pub mod symmetry;

pub use error::{Error, Result};
pub use focksolver::{FockBasis, FockHamiltonian, MatchReport};
pub use hamiltonian::{MultiIndex, OscillatorChain, QuadraticForm};
pub use linalg::{ComplexMatrix, EigenResult};
pub use normalmodes::{EigenLevel, NormalModeSpectrum, Reality};
pub use perturbation::{DegenerateCluster, RealityPrediction, SeriesCoefficients, Verdict};
pub use phasescan::{Axis, Bracket, Parameter, PhaseDiagram, PhaseLabel};
pub use symmetry::{AntiunitaryOp, CommutantClass, GroupLabel, GroupTable, SignedPermutation};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
