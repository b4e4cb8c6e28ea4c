//! Radial bound-state eigensolvers and spectral comparison checks.
//!
//! Hamiltonians of the form `T(p²) + V(r)` are represented in a truncated
//! radial harmonic-oscillator basis, diagonalized with a self-contained dense
//! symmetric eigensolver, and compared along the linear path
//! `H(a) = (1−a)·H₁ + a·H₂`. If `H₂ − H₁` is positive semidefinite, every
//! level rises monotonically along that path, which is checked both through
//! the Hellmann–Feynman expectation `⟨a|H₂ − H₁|a⟩` and by finite differences.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below fix the scalar to `f64`.

pub mod analytic;
pub mod basis;
pub mod error;
pub mod flow;
pub mod hamiltonian;
pub mod linalg;
pub mod scalar;

pub use basis::{kinetic_matrix, p2_matrix, potential_matrix, r2_matrix, BasisSpec, RadialBasis};
pub use error::{Error, Result};
pub use flow::{
    flow_levels, flow_matrices, ordering_report, pointwise_ordering, richardson_derivative, Derivative,
    FlowResult, FlowSpec, LevelTrack, OrderingReport, OscillatorLength, PointwiseVerdict, Stencil,
};
pub use hamiltonian::{
    assemble, optimize_basis_scale, solve_levels, Hamiltonian, KineticSpec, Level, PotentialSpec,
    ScaleSearch,
};
pub use linalg::{apply_spectral_function, eigh, eigvalsh, min_eigenvalue, SpectralDecomposition, SymMatrix};
pub use scalar::Real;

pub type SymMatrix64 = SymMatrix<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type BasisSpec64 = BasisSpec<f64>;
pub type KineticSpec64 = KineticSpec<f64>;
pub type PotentialSpec64 = PotentialSpec<f64>;
pub type Hamiltonian64 = Hamiltonian<f64>;
pub type Level64 = Level<f64>;
pub type FlowSpec64 = FlowSpec<f64>;
pub type FlowResult64 = FlowResult<f64>;

pub type SymMatrix32 = SymMatrix<f32>;
pub type BasisSpec32 = BasisSpec<f32>;
