//! Brute-force reference path: cyclic Jacobi diagonalization of dense
//! Hermitian matrices and evolution built from it.
//!
//! Nothing here touches the Krawtchouk recurrences; the two routes are kept
//! independent so that agreement between them means something.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::hamiltonian::SubspaceMatrix;
use crate::krawtchouk::EigenSystem;
use crate::linalg::SquareMatrix;
use crate::{Error, Result, Scalar};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseEigenResult<T> {
    pub eigenvalues: Vec<T>,
    /// `eigenvectors[k]` is the column for `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex<T>>>,
}

/// Diagonalizes a Hermitian matrix with complex Jacobi rotations.
///
/// Each pivot `(p, q)` is first made real by rephasing basis vector `q`, then
/// annihilated with a real plane rotation. Sweeps repeat until the
/// off-diagonal mass is below rounding level.
pub fn dense_hermitian_eig<T: Scalar>(input: &SquareMatrix<T>) -> Result<DenseEigenResult<T>> {
    let n = input.dim();
    let scale = input.max_abs().max(T::one());
    let defect = input.hermitian_defect();
    if defect > T::tolerance() * scale {
        return Err(Error::NotHermitian(defect.to_f64_lossy()));
    }

    let mut a = input.clone();
    let mut v = SquareMatrix::<T>::identity(n);
    let threshold = T::epsilon() * scale;

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let magnitude = apq.norm();
                if magnitude <= threshold * T::lit(1e-3) {
                    continue;
                }
                // Rephase column/row q so that a_pq becomes real and positive.
                let d = (apq / magnitude).conj();
                for k in 0..n {
                    a[(k, q)] = a[(k, q)] * d;
                }
                for k in 0..n {
                    a[(q, k)] = a[(q, k)] * d.conj();
                }
                for k in 0..n {
                    v[(k, q)] = v[(k, q)] * d;
                }

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * magnitude);
                let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                let t = sign / (theta.abs() + (T::one() + theta * theta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                for k in 0..n {
                    let kp = a[(k, p)];
                    let kq = a[(k, q)];
                    a[(k, p)] = kp * c - kq * s;
                    a[(k, q)] = kp * s + kq * c;
                }
                for k in 0..n {
                    let pk = a[(p, k)];
                    let qk = a[(q, k)];
                    a[(p, k)] = pk * c - qk * s;
                    a[(q, k)] = pk * s + qk * c;
                }
                for k in 0..n {
                    let kp = v[(k, p)];
                    let kq = v[(k, q)];
                    v[(k, p)] = kp * c - kq * s;
                    v[(k, q)] = kp * s + kq * c;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    Ok(DenseEigenResult {
        eigenvalues: order.iter().map(|&i| a[(i, i)].re).collect(),
        eigenvectors: order.iter().map(|&i| v.column(i)).collect(),
    })
}

pub fn dense_subspace_eig<T: Scalar>(matrix: &SubspaceMatrix<T>) -> Result<DenseEigenResult<T>> {
    dense_hermitian_eig(&matrix.matrix)
}

/// `exp(-iHt)` assembled from the dense eigendecomposition of `H`.
pub fn dense_propagator<T: Scalar>(hamiltonian: &SquareMatrix<T>, t: T) -> Result<SquareMatrix<T>> {
    let eig = dense_hermitian_eig(hamiltonian)?;
    let n = hamiltonian.dim();
    let mut u = SquareMatrix::zeros(n);
    for (lambda, vec) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let phase = Complex::from_polar(T::one(), -*lambda * t);
        for r in 0..n {
            for c in 0..n {
                u[(r, c)] = u[(r, c)] + phase * vec[r] * vec[c].conj();
            }
        }
    }
    Ok(u)
}

/// Rotates `v` by the global phase that makes its largest-modulus component
/// real and positive.
///
/// Mirror-symmetric distributions tie `|v_n| = |v_{M-n}|`, so the pivot is the
/// lowest index whose modulus is within a relative `1e-8` of the maximum.
pub fn align_phase<T: Scalar>(v: &[Complex<T>]) -> Vec<Complex<T>> {
    let largest = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if largest.is_zero() {
        return v.to_vec();
    }
    let cutoff = largest * (T::one() - T::lit(1e-8));
    let pivot = v.iter().find(|z| z.norm() >= cutoff).copied().expect("maximum exists");
    let rotation = pivot.conj() / pivot.norm();
    v.iter().map(|z| z * rotation).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumComparison<T> {
    pub max_eigenvalue_gap: T,
    /// Euclidean norm of the difference of phase-aligned eigenvectors,
    /// maximized over the spectrum.
    pub max_vector_gap: T,
    /// Largest difference of photon-number probabilities `|c_n|²`.
    pub max_probability_gap: T,
}

impl<T: Scalar> SpectrumComparison<T> {
    pub fn within(&self, eigenvalue_tol: T, vector_tol: T) -> bool {
        self.max_eigenvalue_gap < eigenvalue_tol && self.max_vector_gap < vector_tol
    }
}

/// Compares a dense decomposition with the analytic eigensystem.
pub fn compare_spectra<T: Scalar>(
    dense: &DenseEigenResult<T>,
    analytic: &EigenSystem<T>,
) -> Result<SpectrumComparison<T>> {
    let dim = analytic.dim();
    if dense.eigenvalues.len() != dim || dense.eigenvectors.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: dense.eigenvalues.len(),
        });
    }
    let mut sorted = analytic.eigenvalues.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let max_eigenvalue_gap = dense
        .eigenvalues
        .iter()
        .zip(&sorted)
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max);

    let mut max_vector_gap = T::zero();
    let mut max_probability_gap = T::zero();
    for (dense_vec, state) in dense.eigenvectors.iter().zip(&analytic.eigenvectors) {
        let a = align_phase(dense_vec);
        let b = align_phase(state.amplitudes());
        let gap = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<T>().sqrt();
        max_vector_gap = max_vector_gap.max(gap);
        for (x, y) in dense_vec.iter().zip(state.amplitudes()) {
            max_probability_gap = max_probability_gap.max((x.norm_sqr() - y.norm_sqr()).abs());
        }
    }
    Ok(SpectrumComparison {
        max_eigenvalue_gap,
        max_vector_gap,
        max_probability_gap,
    })
}

/// Residual `max_k |A v_k - λ_k v_k|` and orthonormality defect of a result.
pub fn decomposition_defects<T: Scalar>(matrix: &SquareMatrix<T>, eig: &DenseEigenResult<T>) -> (T, T) {
    let mut residual = T::zero();
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let av = matrix.mul_vec(v);
        for (x, y) in av.iter().zip(v) {
            residual = residual.max((x - y * *lambda).norm());
        }
    }
    let mut orthonormality = T::zero();
    for (i, a) in eig.eigenvectors.iter().enumerate() {
        for (j, b) in eig.eigenvectors.iter().enumerate() {
            let target = if i == j { Complex::one() } else { Complex::zero() };
            orthonormality = orthonormality.max((crate::linalg::inner(a, b) - target).norm());
        }
    }
    (residual, orthonormality)
}
