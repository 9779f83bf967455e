//! Fixed-photon-number Fock subspaces for two and four modes.
//!
//! A two-mode state with `M` photons lives in the `M + 1` dimensional span of
//! `|M-n, n⟩`. Throughout the crate the amplitude at index `n` belongs to the
//! basis vector with `n` photons in mode 2 and `M - n` photons in mode 1.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::linalg;
use crate::{Error, Result, Scalar};

/// Largest photon number accepted where the library bounds it explicitly.
pub const MAX_PHOTONS: usize = 60;

/// Dimension of the `M`-photon two-mode subspace.
pub fn subspace_dim(total: usize) -> usize {
    total + 1
}

/// Which of the two modes an observable refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    First,
    Second,
}

/// Pure state of two modes with a definite total photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> TwoModeState<T> {
    /// Builds a normalized state; the squared norm must be 1 within
    /// [`Scalar::tolerance`].
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let state = Self::unnormalized(amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > T::tolerance() {
            return Err(Error::NotNormalized(norm.to_f64_lossy()));
        }
        Ok(state)
    }

    /// Builds a state without the normalization check, for intermediate
    /// results.
    pub fn unnormalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = linalg::norm_sqr(&amplitudes).sqrt();
        if norm.is_zero() || !norm.is_finite() {
            return Err(Error::NotNormalized(norm.to_f64_lossy()));
        }
        Self::unnormalized(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub fn from_real(amplitudes: &[T]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&a| Complex::new(a, T::zero())).collect())
    }

    /// The Fock state `|M-n, n⟩`.
    pub fn fock(total: usize, n: usize) -> Result<Self> {
        if n > total {
            return Err(Error::FockIndexOutOfRange { n, total });
        }
        let mut amplitudes = vec![Complex::zero(); subspace_dim(total)];
        amplitudes[n] = Complex::one();
        Ok(Self { amplitudes })
    }

    pub fn total_photons(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        linalg::norm_sqr(&self.amplitudes)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - T::one()).abs() <= T::tolerance()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(linalg::inner(&self.amplitudes, &other.amplitudes))
    }

    /// Photon-number distribution of mode 2, `|ξ_n|²`.
    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `⟨n̂_1⟩` or `⟨n̂_2⟩`.
    pub fn number_expectation(&self, mode: Mode) -> T {
        let total = self.total_photons();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, z)| {
                let count = match mode {
                    Mode::First => total - n,
                    Mode::Second => n,
                };
                T::of_usize(count) * z.norm_sqr()
            })
            .sum()
    }

    /// Largest amplitude deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.amplitudes.len() != other.amplitudes.len() {
            return T::infinity();
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
        }
    }
}

/// Four-mode occupation `(n₁, n₂, n₃, n₄)`.
pub type Occupation = [usize; 4];

/// Pure four-mode state stored sparsely by occupation.
///
/// Entries may carry different total photon numbers: the sorting cascade
/// turns a single-mode superposition of Fock states into exactly such a
/// state. [`MultiModeState::with_total`] enforces a common total.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiModeState<T> {
    amplitudes: BTreeMap<Occupation, Complex<T>>,
}

impl<T: Scalar> MultiModeState<T> {
    pub fn new(entries: impl IntoIterator<Item = (Occupation, Complex<T>)>) -> Result<Self> {
        let state = Self::unnormalized(entries);
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > T::tolerance() {
            return Err(Error::NotNormalized(norm.to_f64_lossy()));
        }
        Ok(state)
    }

    /// Normalized state whose occupations all sum to `total`.
    pub fn with_total(total: usize, entries: impl IntoIterator<Item = (Occupation, Complex<T>)>) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        if let Some((occupation, _)) = entries.iter().find(|(o, _)| o.iter().sum::<usize>() != total) {
            return Err(Error::OccupationMismatch {
                occupation: *occupation,
                total,
            });
        }
        Self::new(entries)
    }

    pub(crate) fn unnormalized(entries: impl IntoIterator<Item = (Occupation, Complex<T>)>) -> Self {
        let mut amplitudes = BTreeMap::new();
        for (occupation, amplitude) in entries {
            if amplitude.is_zero() {
                continue;
            }
            let slot = amplitudes.entry(occupation).or_insert_with(Complex::zero);
            *slot = *slot + amplitude;
        }
        Self { amplitudes }
    }

    pub fn fock(occupation: Occupation) -> Self {
        Self {
            amplitudes: BTreeMap::from([(occupation, Complex::one())]),
        }
    }

    /// The common photon number of every stored occupation, if there is one.
    pub fn total_photons(&self) -> Option<usize> {
        let mut totals = self.amplitudes.keys().map(|o| o.iter().sum::<usize>());
        let first = totals.next()?;
        totals.all(|t| t == first).then_some(first)
    }

    pub fn amplitude(&self, occupation: &Occupation) -> Complex<T> {
        self.amplitudes.get(occupation).copied().unwrap_or_else(Complex::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Complex<T>)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    /// Drops entries with modulus at or below `threshold`.
    pub fn pruned(&self, threshold: T) -> Self {
        Self {
            amplitudes: self
                .amplitudes
                .iter()
                .filter(|(_, z)| z.norm() > threshold)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// Largest amplitude deviation from `other` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(T::zero(), T::max)
    }
}

/// Coherent state `|α⟩` truncated to photon numbers `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentTruncation<T> {
    pub alpha: Complex<T>,
    pub cutoff: usize,
    pub amplitudes: Vec<Complex<T>>,
    /// Probability carried by the omitted tail `n > cutoff`.
    pub discarded_weight: T,
}

/// Truncates `|α⟩` at the smallest cutoff whose discarded tail weight is below
/// `epsilon`.
pub fn truncated_coherent<T: Scalar>(alpha: Complex<T>, epsilon: T) -> Result<CoherentTruncation<T>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::InvalidEpsilon(epsilon.to_f64_lossy()));
    }
    let mean = alpha.norm_sqr();
    let lead = (-mean / T::lit(2.0)).exp();

    // Poisson weights e^{-|α|²}|α|^{2n}/n!, generated until past the mean and
    // negligible relative to epsilon.
    let mut weights = vec![lead * lead];
    let floor = epsilon * T::lit(1e-6);
    loop {
        let n = weights.len();
        let next = weights[n - 1] * mean / T::of_usize(n);
        if (T::of_usize(n) > mean && next < floor) || next.is_zero() {
            break;
        }
        if n > 4 * MAX_PHOTONS {
            return Err(Error::PhotonLimit { requested: n, limit: MAX_PHOTONS });
        }
        weights.push(next);
    }

    let mut tail = T::zero();
    let mut tails = vec![T::zero(); weights.len()];
    for n in (0..weights.len()).rev() {
        tails[n] = tail;
        tail = tail + weights[n];
    }
    let cutoff = tails.iter().position(|&t| t < epsilon).unwrap_or(weights.len() - 1);
    if cutoff > MAX_PHOTONS {
        return Err(Error::PhotonLimit { requested: cutoff, limit: MAX_PHOTONS });
    }

    let mut amplitudes = Vec::with_capacity(cutoff + 1);
    let mut current = Complex::new(lead, T::zero());
    amplitudes.push(current);
    for n in 1..=cutoff {
        current = current * alpha / T::of_usize(n).sqrt();
        amplitudes.push(current);
    }

    Ok(CoherentTruncation {
        alpha,
        cutoff,
        amplitudes,
        discarded_weight: tails[cutoff],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    #[test]
    fn subspace_dimensions() {
        assert_eq!(subspace_dim(0), 1);
        assert_eq!(subspace_dim(2), 3);
        assert_eq!(subspace_dim(38), 39);
    }

    #[test]
    fn fock_states() {
        let s = TwoModeState::<f64>::fock(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[C::one(), C::zero()]);
        let s = TwoModeState::<f64>::fock(2, 1).unwrap();
        assert_eq!(s.amplitudes(), &[C::zero(), C::one(), C::zero()]);
        assert_eq!(
            TwoModeState::<f64>::fock(3, 4),
            Err(Error::FockIndexOutOfRange { n: 4, total: 3 })
        );
    }

    #[test]
    fn number_expectations() {
        let s = TwoModeState::<f64>::fock(10, 0).unwrap();
        assert_eq!(s.number_expectation(Mode::Second), 0.0);
        assert_eq!(s.number_expectation(Mode::First), 10.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = TwoModeState::from_real(&[h, h]).unwrap();
        assert!((s.number_expectation(Mode::Second) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalization_is_validated() {
        assert!(matches!(
            TwoModeState::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(TwoModeState::unnormalized(vec![C::new(2.0, 0.0)]).is_ok());
        assert_eq!(TwoModeState::<f64>::unnormalized(vec![]), Err(Error::EmptyState));
    }

    #[test]
    fn fock_basis_is_orthonormal() {
        for total in 0..6 {
            for a in 0..=total {
                for b in 0..=total {
                    let x = TwoModeState::<f64>::fock(total, a).unwrap();
                    let y = TwoModeState::<f64>::fock(total, b).unwrap();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert_eq!(x.inner(&y).unwrap(), C::new(expected, 0.0));
                }
            }
        }
    }

    #[test]
    fn vacuum_coherent_state() {
        let t = truncated_coherent(C::zero(), 1e-3).unwrap();
        assert_eq!(t.cutoff, 0);
        assert_eq!(t.amplitudes, vec![C::one()]);
        assert_eq!(t.discarded_weight, 0.0);
    }

    #[test]
    fn coherent_alpha_two() {
        let t = truncated_coherent(C::new(2.0, 0.0), 1e-12).unwrap();
        assert!(t.discarded_weight < 1e-12);
        assert!((t.amplitudes[0].re - (-2.0f64).exp()).abs() < 1e-16);

        // Independent tail: 1 - Σ_{n≤N} e^{-4} 4^n / n!, with the factorial
        // taken from a fresh product.
        let mut kept = 0.0;
        for n in 0..=t.cutoff {
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            kept += (-4.0f64).exp() * 4f64.powi(n as i32) / fact;
        }
        assert!((1.0 - kept - t.discarded_weight).abs() < 1e-14);
        // Minimality: one fewer term leaves more than epsilon behind.
        let fact: f64 = (1..=t.cutoff).map(|k| k as f64).product();
        let last = (-4.0f64).exp() * 4f64.powi(t.cutoff as i32) / fact;
        assert!(t.discarded_weight + last >= 1e-12);
    }

    #[test]
    fn coherent_rejects_bad_epsilon() {
        assert_eq!(
            truncated_coherent(C::new(2.0, 0.0), 2.0),
            Err(Error::InvalidEpsilon(2.0))
        );
        assert!(truncated_coherent(C::new(2.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn multimode_validation() {
        let ok = MultiModeState::<f64>::with_total(2, [([1, 1, 0, 0], C::one())]);
        assert!(ok.is_ok());
        let bad = MultiModeState::<f64>::with_total(2, [([1, 0, 0, 0], C::one())]);
        assert!(matches!(bad, Err(Error::OccupationMismatch { .. })));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mixed = MultiModeState::new([([1, 0, 0, 0], C::new(h, 0.0)), ([0, 2, 0, 0], C::new(h, 0.0))]).unwrap();
        assert_eq!(mixed.total_photons(), None);
        assert!(MultiModeState::new([([1, 0, 0, 0], C::new(2.0, 0.0))]).is_err());
        let s = MultiModeState::<f64>::fock([0, 2, 0, 0]);
        assert_eq!(s.total_photons(), Some(2));
        assert_eq!(s.amplitude(&[0, 2, 0, 0]), C::one());
        assert_eq!(s.amplitude(&[2, 0, 0, 0]), C::zero());
    }

    #[test]
    fn runs_on_f32() {
        let s = TwoModeState::<f32>::fock(3, 2).unwrap();
        assert_eq!(s.number_expectation(Mode::Second), 2.0);
    }

    fn normalized_state() -> impl Strategy<Value = TwoModeState<f64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12).prop_filter_map("nonzero", |v| {
            TwoModeState::normalized(v.into_iter().map(|(re, im)| C::new(re, im)).collect()).ok()
        })
    }

    proptest! {
        #[test]
        fn number_expectations_sum_to_total(state in normalized_state()) {
            let sum = state.number_expectation(Mode::First) + state.number_expectation(Mode::Second);
            prop_assert!((sum - state.total_photons() as f64).abs() < 1e-12);
        }

        #[test]
        fn coherent_amplitude_ratio(re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let alpha = C::new(re, im);
            let t = truncated_coherent(alpha, 1e-10).unwrap();
            prop_assert!(t.discarded_weight < 1e-10);
            for n in 0..t.cutoff {
                let expected = alpha / ((n + 1) as f64).sqrt();
                let ratio_gap = (t.amplitudes[n + 1] - t.amplitudes[n] * expected).norm();
                prop_assert!(ratio_gap <= 1e-12 * t.amplitudes[n].norm().max(1e-300));
            }
        }
    }
}
