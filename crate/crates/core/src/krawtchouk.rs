//! Spectral solution of the beam-splitter Hamiltonian through Krawtchouk
//! polynomials at `p = 1/2`.
//!
//! On the `M`-photon subspace the eigenvector coefficients `c_n(E)` obey
//!
//! ```text
//! (E/|γ|) c_n = √((n+1)(M-n)) c_{n+1} + √(n(M-n+1)) c_{n-1}
//! ```
//!
//! which is the Krawtchouk recurrence with `2x - M = E/|γ|`. The spectrum is
//! the lattice `E_x = (2x - M)|γ|`, `x = 0..=M`, and the eigenvector for `E_x`
//! has amplitudes `c_n(E_x) e^{-ing}` with `g = arg γ`.

use num_complex::Complex;
use num_traits::Zero;

use crate::fockspace::TwoModeState;
use crate::{Error, Result, Scalar};

/// Beam-splitter coupling `γ = |γ| e^{ig}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling<T> {
    gamma: Complex<T>,
}

impl<T: Scalar> Coupling<T> {
    pub fn new(gamma: Complex<T>) -> Result<Self> {
        let magnitude = gamma.norm();
        if magnitude <= T::zero() || !magnitude.is_finite() {
            return Err(Error::ZeroCoupling);
        }
        Ok(Self { gamma })
    }

    pub fn real(gamma: T) -> Result<Self> {
        Self::new(Complex::new(gamma, T::zero()))
    }

    pub fn gamma(&self) -> Complex<T> {
        self.gamma
    }

    pub fn magnitude(&self) -> T {
        self.gamma.norm()
    }

    /// `g = arg γ`.
    pub fn phase(&self) -> T {
        self.gamma.arg()
    }
}

/// Lattice energy `E_x = (2x - M)|γ|` in units of `|γ|`.
pub fn lattice_energy<T: Scalar>(total: usize, x: usize) -> T {
    T::of_usize(2 * x) - T::of_usize(total)
}

/// Lattice index `x` for an energy given in units of `|γ|`, if it is an
/// eigenvalue on the `M`-photon subspace.
pub fn lattice_index<T: Scalar>(total: usize, energy: T) -> Option<usize> {
    let doubled = energy + T::of_usize(total);
    let rounded = doubled.round();
    if (doubled - rounded).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(64.0)) {
        return None;
    }
    let twice_x = rounded.to_i64()?;
    if twice_x < 0 || twice_x % 2 != 0 || twice_x / 2 > total as i64 {
        return None;
    }
    Some((twice_x / 2) as usize)
}

fn upper_weight<T: Scalar>(total: usize, n: usize) -> T {
    T::of_usize((n + 1) * (total - n)).sqrt()
}

fn lower_weight<T: Scalar>(total: usize, n: usize) -> T {
    T::of_usize(n * (total + 1 - n)).sqrt()
}

/// Runs the upward recurrence with `K_0 = 1` and returns `K_0..=K_degree`.
///
/// The step past `n = M` has a vanishing leading weight; that last entry is the
/// residual `(2x - M)K_M - √M K_{M-1}`, the characteristic polynomial whose
/// roots are `x = 0..=M`.
fn recurrence<T: Scalar>(degree: usize, x: T, total: usize) -> Vec<T> {
    let shifted = T::lit(2.0) * x - T::of_usize(total);
    let mut values = Vec::with_capacity(degree + 1);
    values.push(T::one());
    for n in 0..degree {
        let previous = if n == 0 {
            T::zero()
        } else {
            lower_weight::<T>(total, n) * values[n - 1]
        };
        let numerator = shifted * values[n] - previous;
        let next = if n < total {
            numerator / upper_weight(total, n)
        } else {
            numerator
        };
        values.push(next);
    }
    values
}

/// `K_n(x; 1/2, M)` normalized by `K_0 = 1`, for `0 ≤ n ≤ M + 1`.
pub fn krawtchouk_value<T: Scalar>(n: usize, x: T, total: usize) -> Result<T> {
    if n > total + 1 {
        return Err(Error::DegreeOutOfRange { n, total });
    }
    Ok(recurrence(n, x, total)[n])
}

/// `(y)_k = y (y+1) ... (y+k-1)`.
fn pochhammer<T: Scalar>(y: T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (y + T::of_usize(i)))
}

/// Hypergeometric form of `K_n(x; 1/2, M)` with `K_0 = 1`.
///
/// The alternating sum cancels badly for large `M`, so this is a cross-check
/// for `M ≤ 20` only and is never used to build eigenvectors.
pub fn krawtchouk_hypergeometric<T: Scalar>(n: usize, x: T, total: usize) -> Result<T> {
    if n > total {
        return Err(Error::DegreeOutOfRange { n, total });
    }
    let minus_m = -T::of_usize(total);
    let mut sum = T::zero();
    let mut factorial = T::one();
    let mut power = T::one();
    for k in 0..=n {
        if k > 0 {
            factorial = factorial * T::of_usize(k);
            power = power * T::lit(2.0);
        }
        let term = pochhammer(-T::of_usize(n), k) * pochhammer(-x, k)
            / (pochhammer(minus_m, k) * factorial);
        sum = sum + term * power;
    }
    let sign = if n.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(sign * binomial_sqrt::<T>(total)[n] * sum)
}

/// `√C(M, n)` for `n = 0..=M` by a running product.
fn binomial_sqrt<T: Scalar>(total: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(total + 1);
    let mut binom = T::one();
    out.push(T::one());
    for n in 0..total {
        binom = binom * T::of_usize(total - n) / T::of_usize(n + 1);
        out.push(binom.sqrt());
    }
    out
}

/// Unit-norm coefficients `c_n(E_x)` with `c_0 > 0`.
///
/// The recurrence runs upward from `n = 0` across the first half of the
/// lattice; the second half is filled from the reflection
/// `c_{M-n} = (-1)^{M+x} c_n`, which follows from the persymmetry of the
/// tridiagonal matrix. Running the recurrence all the way through the second
/// evanescent edge would amplify rounding error there.
pub fn coefficient_vector<T: Scalar>(total: usize, x: usize) -> Result<Vec<T>> {
    if x > total {
        return Err(Error::EigenIndexOutOfRange { x, total });
    }
    let half = total / 2;
    let mut values = recurrence(half, T::of_usize(x), total);
    values.resize(total + 1, T::zero());
    let reflect_sign = if (total + x).is_multiple_of(2) { T::one() } else { -T::one() };
    for n in 0..=half {
        let mirror = total - n;
        if mirror == n {
            if reflect_sign < T::zero() {
                values[n] = T::zero();
            }
        } else {
            values[mirror] = reflect_sign * values[n];
        }
    }
    let norm = values.iter().map(|&v| v * v).sum::<T>().sqrt();
    Ok(values.into_iter().map(|v| v / norm).collect())
}

/// `c_n = 2^{-M/2} √C(M, n)`, the coefficients of the `E = M|γ|` eigenvector.
pub fn top_eigenvector_closed_form<T: Scalar>(total: usize) -> Vec<T> {
    let scale = T::lit(2.0).powf(-T::of_usize(total) / T::lit(2.0));
    binomial_sqrt::<T>(total).into_iter().map(|b| b * scale).collect()
}

/// Maximum per-component residual of the three-term recurrence for a
/// coefficient vector at lattice index `x`.
pub fn recurrence_residual<T: Scalar>(coefficients: &[T], x: usize) -> T {
    let total = coefficients.len() - 1;
    let energy = lattice_energy::<T>(total, x);
    (0..=total)
        .map(|n| {
            let up = if n < total {
                upper_weight::<T>(total, n) * coefficients[n + 1]
            } else {
                T::zero()
            };
            let down = if n > 0 {
                lower_weight::<T>(total, n) * coefficients[n - 1]
            } else {
                T::zero()
            };
            (energy * coefficients[n] - up - down).abs()
        })
        .fold(T::zero(), T::max)
}

/// Eigenvalues and eigenvectors of `H0` on one `M`-photon subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem<T> {
    pub total: usize,
    pub coupling: Coupling<T>,
    /// `E_x = (2x - M)|γ|`, ascending in `x`.
    pub eigenvalues: Vec<T>,
    /// Real coefficient vectors `c_n(E_x)`.
    pub coefficients: Vec<Vec<T>>,
    /// Phased eigenvectors `c_n(E_x) e^{-ing}`.
    pub eigenvectors: Vec<TwoModeState<T>>,
}

pub fn eigensystem<T: Scalar>(total: usize, coupling: Coupling<T>) -> EigenSystem<T> {
    let magnitude = coupling.magnitude();
    let g = coupling.phase();
    let phases: Vec<Complex<T>> = (0..=total)
        .map(|n| Complex::from_polar(T::one(), -T::of_usize(n) * g))
        .collect();

    let mut eigenvalues = Vec::with_capacity(total + 1);
    let mut coefficients = Vec::with_capacity(total + 1);
    let mut eigenvectors = Vec::with_capacity(total + 1);
    for x in 0..=total {
        eigenvalues.push(lattice_energy::<T>(total, x) * magnitude);
        let c = coefficient_vector::<T>(total, x).expect("x within lattice");
        let amplitudes = c.iter().zip(&phases).map(|(&cn, &ph)| ph * cn).collect();
        eigenvectors.push(TwoModeState::unnormalized(amplitudes).expect("nonempty"));
        coefficients.push(c);
    }
    EigenSystem {
        total,
        coupling,
        eigenvalues,
        coefficients,
        eigenvectors,
    }
}

impl<T: Scalar> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.total + 1
    }

    /// `⟨E_x|ψ⟩` for every `x`.
    pub fn project(&self, amplitudes: &[Complex<T>]) -> Vec<Complex<T>> {
        self.eigenvectors
            .iter()
            .map(|v| crate::linalg::inner(v.amplitudes(), amplitudes))
            .collect()
    }

    /// `Σ_x weights_x |E_x⟩`.
    pub fn synthesize(&self, weights: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); self.dim()];
        for (w, v) in weights.iter().zip(&self.eigenvectors) {
            for (o, a) in out.iter_mut().zip(v.amplitudes()) {
                *o = *o + w * a;
            }
        }
        out
    }
}
