//! Exact time evolution by spectral decomposition in the `Ĥ₀` eigenbasis.
//!
//! For a spec with eigenvalues `ε_x` on the `M`-photon block,
//! `U(t) = Σ_x e^{-iε_x t} |E_x⟩⟨E_x|`. No series expansion is involved.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::fockspace::{
    subspace_dim, truncated_coherent, CoherentTruncation, Mode, MultiModeState, Occupation, TwoModeState,
};
use crate::hamiltonian::{design_evenswap, design_pswap, HamiltonianSpec};
use crate::krawtchouk::{eigensystem, Coupling, EigenSystem};
use crate::linalg::{self, SquareMatrix};
use crate::{Error, Result, Scalar};

/// `exp(-iHt)` restricted to one photon-number block.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator<T> {
    pub total: usize,
    pub matrix: SquareMatrix<T>,
    pub spec: HamiltonianSpec<T>,
    pub time: T,
}

impl<T: Scalar> Propagator<T> {
    pub fn apply(&self, amplitudes: &[Complex<T>]) -> Vec<Complex<T>> {
        self.matrix.mul_vec(amplitudes)
    }

    pub fn unitarity_defect(&self) -> T {
        self.matrix.unitarity_defect()
    }
}

/// Eigenbasis and block eigenvalues of a spec on one `M`-photon subspace.
struct SpectralBlock<T> {
    system: EigenSystem<T>,
    eigenvalues: Vec<T>,
}

impl<T: Scalar> SpectralBlock<T> {
    fn new(spec: &HamiltonianSpec<T>, total: usize) -> Self {
        let system = eigensystem(total, spec.coupling());
        let eigenvalues = system
            .eigenvalues
            .iter()
            .map(|&e| spec.eigenvalue_at(total, e))
            .collect();
        Self { system, eigenvalues }
    }

    fn phases(&self, t: T) -> impl Iterator<Item = Complex<T>> + '_ {
        self.eigenvalues
            .iter()
            .map(move |&eps| Complex::from_polar(T::one(), -eps * t))
    }

    fn evolve_projections(&self, projections: &[Complex<T>], t: T) -> Vec<Complex<T>> {
        let weights: Vec<_> = projections.iter().zip(self.phases(t)).map(|(p, ph)| p * ph).collect();
        self.system.synthesize(&weights)
    }
}

pub fn propagator<T: Scalar>(spec: &HamiltonianSpec<T>, total: usize, t: T) -> Propagator<T> {
    let block = SpectralBlock::new(spec, total);
    let dim = subspace_dim(total);
    let mut matrix = SquareMatrix::zeros(dim);
    for (phase, vector) in block.phases(t).zip(&block.system.eigenvectors) {
        let v = vector.amplitudes();
        for r in 0..dim {
            let left = phase * v[r];
            for c in 0..dim {
                matrix[(r, c)] = matrix[(r, c)] + left * v[c].conj();
            }
        }
    }
    Propagator {
        total,
        matrix,
        spec: spec.clone(),
        time: t,
    }
}

fn require_normalized<T: Scalar>(state: &TwoModeState<T>) -> Result<()> {
    if state.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized(state.norm_sqr().to_f64_lossy()))
    }
}

/// `exp(-iHt)|ψ⟩` for a normalized two-mode state.
pub fn evolve<T: Scalar>(spec: &HamiltonianSpec<T>, state: &TwoModeState<T>, t: T) -> Result<TwoModeState<T>> {
    require_normalized(state)?;
    let block = SpectralBlock::new(spec, state.total_photons());
    let projections = block.system.project(state.amplitudes());
    TwoModeState::unnormalized(block.evolve_projections(&projections, t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample<T> {
    pub t: T,
    pub n2_expectation: T,
    pub state: Option<TwoModeState<T>>,
}

/// `samples` evenly spaced times covering `[0, t_max]` inclusive.
pub fn uniform_grid<T: Scalar>(t_max: T, samples: usize) -> Vec<T> {
    match samples {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => {
            let step = t_max / T::of_usize(samples - 1);
            (0..samples).map(|k| step * T::of_usize(k)).collect()
        }
    }
}

/// `⟨n̂₂⟩(t)` along `grid`.
pub fn n2_trajectory<T: Scalar>(
    spec: &HamiltonianSpec<T>,
    initial: &TwoModeState<T>,
    grid: &[T],
) -> Result<Vec<TrajectorySample<T>>> {
    trajectory(spec, initial, grid, false)
}

/// Like [`n2_trajectory`] but keeps the full state at every sample.
pub fn n2_trajectory_with_states<T: Scalar>(
    spec: &HamiltonianSpec<T>,
    initial: &TwoModeState<T>,
    grid: &[T],
) -> Result<Vec<TrajectorySample<T>>> {
    trajectory(spec, initial, grid, true)
}

fn trajectory<T: Scalar>(
    spec: &HamiltonianSpec<T>,
    initial: &TwoModeState<T>,
    grid: &[T],
    keep_states: bool,
) -> Result<Vec<TrajectorySample<T>>> {
    require_normalized(initial)?;
    if let Some(bad) = grid.iter().find(|t| !t.is_finite()) {
        return Err(Error::InvalidTau(bad.to_f64_lossy()));
    }
    let block = SpectralBlock::new(spec, initial.total_photons());
    let projections = block.system.project(initial.amplitudes());
    grid.iter()
        .map(|&t| {
            let state = TwoModeState::unnormalized(block.evolve_projections(&projections, t))?;
            Ok(TrajectorySample {
                t,
                n2_expectation: state.number_expectation(Mode::Second),
                state: keep_states.then_some(state),
            })
        })
        .collect()
}

/// Two-mode state that superposes several photon-number blocks.
///
/// `blocks[M]` holds the `M + 1` amplitudes of `|M-n, n⟩`; blocks evolve
/// independently and are only combined when reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState<T> {
    blocks: Vec<Vec<Complex<T>>>,
}

impl<T: Scalar> BlockState<T> {
    pub fn new(blocks: Vec<Vec<Complex<T>>>) -> Result<Self> {
        for (total, block) in blocks.iter().enumerate() {
            if block.len() != subspace_dim(total) {
                return Err(Error::DimensionMismatch {
                    expected: subspace_dim(total),
                    found: block.len(),
                });
            }
        }
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<Complex<T>>] {
        &self.blocks
    }

    pub fn max_photons(&self) -> usize {
        self.blocks.len().saturating_sub(1)
    }

    /// Amplitude of `|n₁, n₂⟩`.
    pub fn amplitude(&self, n1: usize, n2: usize) -> Complex<T> {
        self.blocks
            .get(n1 + n2)
            .map(|b| b[n2])
            .unwrap_or_else(Complex::zero)
    }

    pub fn norm_sqr(&self) -> T {
        self.blocks.iter().map(|b| linalg::norm_sqr(b)).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(Complex::zero(), |acc, (a, b)| acc + linalg::inner(a, b))
    }

    /// `|⟨a|b⟩|² / (⟨a|a⟩⟨b|b⟩)`.
    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatGeneration<T> {
    pub coherent: CoherentTruncation<T>,
    /// `exp(-iHτ)|α⟩₁|0⟩₂` under the even-swap Hamiltonian.
    pub evolved: BlockState<T>,
    /// `|0⟩(|α⟩+|-α⟩)/2 + i(|α⟩-|-α⟩)|0⟩/2` from the truncated coherent states.
    pub target: BlockState<T>,
    pub fidelity: T,
}

/// `|0⟩₁(|α⟩+|-α⟩)₂/2 + i(|α⟩-|-α⟩)₁|0⟩₂/2` over the blocks `0..=cutoff`.
pub fn cat_target<T: Scalar>(alpha: Complex<T>, cutoff: usize, epsilon: T) -> Result<BlockState<T>> {
    let plus = truncated_coherent(alpha, epsilon)?;
    let minus = truncated_coherent(-alpha, epsilon)?;
    let half = T::lit(0.5);
    let i = Complex::new(T::zero(), T::one());
    let mut blocks = Vec::with_capacity(cutoff + 1);
    for total in 0..=cutoff {
        let a = plus.amplitudes.get(total).copied().unwrap_or_else(Complex::zero);
        let b = minus.amplitudes.get(total).copied().unwrap_or_else(Complex::zero);
        let mut block = vec![Complex::zero(); subspace_dim(total)];
        // |0, M⟩ sits at n = M and |M, 0⟩ at n = 0; both are |0,0⟩ when M = 0.
        block[total] = block[total] + (a + b) * half;
        block[0] = block[0] + i * (a - b) * half;
        blocks.push(block);
    }
    BlockState::new(blocks)
}

/// Evolves `|α⟩₁|0⟩₂` for one period of the even-swap Hamiltonian.
pub fn cat_from_coherent<T: Scalar>(
    alpha: Complex<T>,
    coupling: Coupling<T>,
    tau: T,
    epsilon: T,
) -> Result<CatGeneration<T>> {
    let coherent = truncated_coherent(alpha, epsilon)?;
    let spec = design_evenswap(coupling, tau)?;
    let mut blocks = Vec::with_capacity(coherent.cutoff + 1);
    for (total, amplitude) in coherent.amplitudes.iter().enumerate() {
        let mut input = vec![Complex::zero(); subspace_dim(total)];
        input[0] = *amplitude;
        blocks.push(propagator(&spec, total, tau).apply(&input));
    }
    let evolved = BlockState::new(blocks)?;
    let target = cat_target(alpha, coherent.cutoff, epsilon)?;
    let fidelity = evolved.fidelity(&target);
    Ok(CatGeneration {
        coherent,
        evolved,
        target,
        fidelity,
    })
}

fn mode_slot(mode: usize) -> Result<usize> {
    if (1..=4).contains(&mode) {
        Ok(mode - 1)
    } else {
        Err(Error::InvalidMode(mode))
    }
}

/// Evolves modes `i` and `j` (1-based) under `spec` for time `t`, treating `i`
/// as the first and `j` as the second mode of the pair. Spectator modes are
/// untouched.
pub fn apply_pairwise<T: Scalar>(
    state: &MultiModeState<T>,
    i: usize,
    j: usize,
    spec: &HamiltonianSpec<T>,
    t: T,
) -> Result<MultiModeState<T>> {
    if i == j {
        return Err(Error::SameMode(i));
    }
    let (si, sj) = (mode_slot(i)?, mode_slot(j)?);

    // Group by spectator occupation and pair photon number.
    let mut groups: BTreeMap<(Occupation, usize), Vec<Complex<T>>> = BTreeMap::new();
    for (occupation, amplitude) in state.iter() {
        let pair = occupation[si] + occupation[sj];
        let mut spectators = *occupation;
        spectators[si] = 0;
        spectators[sj] = 0;
        let block = groups
            .entry((spectators, pair))
            .or_insert_with(|| vec![Complex::zero(); subspace_dim(pair)]);
        block[occupation[sj]] = *amplitude;
    }

    let mut propagators: BTreeMap<usize, Propagator<T>> = BTreeMap::new();
    let mut entries = Vec::new();
    for ((spectators, pair), block) in groups {
        let u = propagators
            .entry(pair)
            .or_insert_with(|| propagator(spec, pair, t));
        for (n, amplitude) in u.apply(&block).into_iter().enumerate() {
            let mut occupation = spectators;
            occupation[si] = pair - n;
            occupation[sj] = n;
            entries.push((occupation, amplitude));
        }
    }
    Ok(MultiModeState::unnormalized(entries))
}

/// One stage of the sorting schedule: modes `(first, second)` coupled by a
/// spec for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeStage<T> {
    pub first: usize,
    pub second: usize,
    pub spec: HamiltonianSpec<T>,
}

/// Even swap on (1, 2), then half-strength protected swaps with `N = 1` on
/// (1, 3) and `N = 2` on (2, 4). The last two act on disjoint mode pairs and
/// are applied one after the other.
pub fn cascade_stages<T: Scalar>(coupling: Coupling<T>, tau: T) -> Result<Vec<CascadeStage<T>>> {
    Ok(vec![
        CascadeStage {
            first: 1,
            second: 2,
            spec: design_evenswap(coupling, tau)?,
        },
        CascadeStage {
            first: 1,
            second: 3,
            spec: design_pswap(coupling, tau, 1, true)?,
        },
        CascadeStage {
            first: 2,
            second: 4,
            spec: design_pswap(coupling, tau, 2, true)?,
        },
    ])
}

/// Routes `M ≤ 4` photons initially in mode 1 into mode `M`.
///
/// `input[n]` is the amplitude of `|n⟩₁|0⟩₂|0⟩₃|0⟩₄`.
pub fn sort_cascade<T: Scalar>(input: &[Complex<T>], coupling: Coupling<T>, tau: T) -> Result<MultiModeState<T>> {
    if let Some(n) = input.iter().rposition(|z| !z.is_zero()) {
        if n > 4 {
            return Err(Error::SortSupport(n));
        }
    }
    let mut state = MultiModeState::new(
        input
            .iter()
            .enumerate()
            .map(|(n, a)| ([n, 0, 0, 0], *a)),
    )?;
    for stage in cascade_stages(coupling, tau)? {
        state = apply_pairwise(&state, stage.first, stage.second, &stage.spec, tau)?;
    }
    Ok(state)
}

/// Fock input `|M⟩₁` for the cascade.
pub fn fock_input<T: Scalar>(photons: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::zero(); photons + 1];
    v[photons] = Complex::one();
    v
}
