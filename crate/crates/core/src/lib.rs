//! Exact simulation of two-mode bosonic systems driven by Hamiltonians built
//! from a beam-splitter coupling `Ĥ₀ = γ a₁†a₂ + γ* a₂†a₁` and the total
//! photon number `n̂`.
//!
//! Every routine is generic over the real [`Scalar`] type; the aliases at the
//! crate root fix it to `f64`, which is what the tolerances quoted in the docs
//! assume.

pub mod entanglement;
mod error;
pub mod evolution;
pub mod fockspace;
pub mod hamiltonian;
pub mod krawtchouk;
pub mod linalg;
pub mod oracle;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_complex::{Complex, Complex64};

pub type State = fockspace::TwoModeState<f64>;
pub type MultiState = fockspace::MultiModeState<f64>;
pub type Coupling = krawtchouk::Coupling<f64>;
pub type EigenSystem = krawtchouk::EigenSystem<f64>;
pub type Spec = hamiltonian::HamiltonianSpec<f64>;
pub type Matrix = linalg::SquareMatrix<f64>;
pub type Propagator = evolution::Propagator<f64>;
pub type Distribution = entanglement::ProbabilityDistribution<f64>;
pub type DenseEigen = oracle::DenseEigenResult<f64>;
