//! Entanglement of two-mode pure states and of the `Ĥ₀` eigenstate family.
//!
//! With a fixed total photon number the Fock basis `|M-n, n⟩` is already a
//! Schmidt basis, so the entanglement is `S_ent = 2 H(|ξ_n|²)` in bits, where
//! `H` is the Shannon entropy.

use crate::fockspace::TwoModeState;
use crate::krawtchouk::{coefficient_vector, lattice_energy, lattice_index};
use crate::{Error, Result, Scalar};

/// Normalized nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution<T> {
    weights: Vec<T>,
}

impl<T: Scalar> ProbabilityDistribution<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDistribution("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| **w < T::zero() || !w.is_finite()) {
            return Err(Error::InvalidDistribution(format!("weight {w} is negative or not finite")));
        }
        let sum: T = weights.iter().copied().sum();
        let tol = T::lit(1e-10).max(T::tolerance());
        if (sum - T::one()).abs() > tol {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

/// `-Σ w log₂ w`, with zero weights contributing nothing.
pub fn shannon_entropy<T: Scalar>(dist: &ProbabilityDistribution<T>) -> T {
    dist.weights
        .iter()
        .map(|&w| if w > T::zero() { -w * w.log2() } else { T::zero() })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport<T> {
    pub total: usize,
    /// Eigenenergy in units of `|γ|`.
    pub energy: T,
    /// `S_ent` in bits.
    pub s_ent: T,
}

/// `S_ent` of the `Ĥ₀` eigenvector `x` on the `M`-photon subspace.
pub fn eigenstate_entanglement<T: Scalar>(total: usize, x: usize) -> Result<EntanglementReport<T>> {
    let c = coefficient_vector::<T>(total, x)?;
    let dist = ProbabilityDistribution::new(c.iter().map(|&v| v * v).collect())?;
    Ok(EntanglementReport {
        total,
        energy: lattice_energy(total, x),
        s_ent: T::lit(2.0) * shannon_entropy(&dist),
    })
}

/// `2 H(|ξ_n|²)` for a normalized two-mode state.
pub fn reduced_entropy<T: Scalar>(state: &TwoModeState<T>) -> Result<T> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm_sqr().to_f64_lossy()));
    }
    let dist = ProbabilityDistribution::new(state.probabilities())?;
    Ok(T::lit(2.0) * shannon_entropy(&dist))
}

/// Counts local maxima. A maximal run of (numerically) equal weights whose
/// neighbors are both strictly smaller counts once; a missing neighbor past
/// either end counts as smaller.
pub fn peak_count<T: Scalar>(dist: &ProbabilityDistribution<T>) -> usize {
    let w = &dist.weights;
    let tol = T::lit(1e-12);
    let mut peaks = 0;
    let mut start = 0;
    while start < w.len() {
        let mut end = start;
        while end + 1 < w.len() && (w[end + 1] - w[end]).abs() <= tol {
            end += 1;
        }
        let left_lower = start == 0 || w[start - 1] < w[start] - tol;
        let right_lower = end + 1 == w.len() || w[end + 1] < w[end] - tol;
        if left_lower && right_lower {
            peaks += 1;
        }
        start = end + 1;
    }
    peaks
}

/// How the energy is chosen for each photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyRule<T> {
    /// A fixed energy in units of `|γ|`; photon numbers where it is not an
    /// eigenvalue are skipped.
    Fixed(T),
    /// The top eigenvalue `E = M|γ|`.
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTable<T> {
    pub reports: Vec<EntanglementReport<T>>,
    /// Photon numbers skipped because the requested energy is off-lattice.
    pub skipped: Vec<usize>,
}

pub fn entropy_vs_m<T: Scalar>(
    rule: EnergyRule<T>,
    totals: impl IntoIterator<Item = usize>,
) -> Result<EntropyTable<T>> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut any = false;
    for total in totals {
        any = true;
        let x = match rule {
            EnergyRule::Max => Some(total),
            EnergyRule::Fixed(energy) => lattice_index(total, energy),
        };
        match x {
            Some(x) => reports.push(eigenstate_entanglement(total, x)?),
            None => skipped.push(total),
        }
    }
    if !any {
        return Err(Error::EmptyRange);
    }
    Ok(EntropyTable { reports, skipped })
}

/// Reports for every eigenvector of the `M`-photon subspace, `E` ascending.
pub fn entropy_vs_e<T: Scalar>(total: usize) -> Vec<EntanglementReport<T>> {
    (0..=total)
        .map(|x| eigenstate_entanglement(total, x).expect("x within lattice"))
        .collect()
}

/// Squared coefficients `|c_n(E)|²` for an energy in units of `|γ|`.
pub fn eigenstate_distribution<T: Scalar>(total: usize, energy: T) -> Result<ProbabilityDistribution<T>> {
    let x = lattice_index(total, energy).ok_or(Error::OffLattice {
        energy: energy.to_f64_lossy(),
        total,
    })?;
    let c = coefficient_vector::<T>(total, x)?;
    ProbabilityDistribution::new(c.iter().map(|&v| v * v).collect())
}
