//! Beam-splitter matrices and nonlinear Hamiltonians built from `n̂` and `Ĥ₀`.
//!
//! A [`HamiltonianSpec`] is a sum of monomials `coeff · n̂ᵃ Ĥ₀ᵇ`. Every such
//! operator commutes with `Ĥ₀`, so on the `M`-photon subspace it acts on the
//! `Ĥ₀` eigenvector `|E_x⟩` as multiplication by `Σ coeff · Mᵃ E_xᵇ`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::fockspace::subspace_dim;
use crate::krawtchouk::{lattice_energy, Coupling};
use crate::linalg::SquareMatrix;
use crate::{Error, Result, Scalar};

/// One term `coeff · n̂^number_power · Ĥ₀^h0_power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial<T> {
    pub number_power: u32,
    pub h0_power: u32,
    pub coeff: T,
}

impl<T> Monomial<T> {
    pub fn new(number_power: u32, h0_power: u32, coeff: T) -> Self {
        Self {
            number_power,
            h0_power,
            coeff,
        }
    }
}

/// The designed conditional-swap Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    /// Unconditional swap `|M,0⟩ → |0,M⟩` at `t = τ`.
    Lswap,
    /// Swap for even `M`, phase `i` for odd `M`.
    Evenswap,
    /// Leaves `protected` photons alone and swaps `protected ± 1`
    /// (`± 2` when `half`).
    Pswap { protected: usize, half: bool },
}

impl DesignKind {
    pub fn label(&self) -> &'static str {
        match self {
            DesignKind::Lswap => "lswap",
            DesignKind::Evenswap => "evenswap",
            DesignKind::Pswap { half: false, .. } => "pswap",
            DesignKind::Pswap { half: true, .. } => "pswap-half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design<T> {
    pub kind: DesignKind,
    pub tau: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec<T> {
    coupling: Coupling<T>,
    terms: Vec<Monomial<T>>,
    design: Option<Design<T>>,
}

impl<T: Scalar> HamiltonianSpec<T> {
    pub fn new(coupling: Coupling<T>, terms: Vec<Monomial<T>>) -> Result<Self> {
        if terms.iter().any(|t| !t.coeff.is_finite()) {
            return Err(Error::InvalidSpec("coefficients must be finite".into()));
        }
        if terms.iter().all(|t| t.coeff.is_zero()) {
            return Err(Error::InvalidSpec("at least one coefficient must be nonzero".into()));
        }
        Ok(Self {
            coupling,
            terms,
            design: None,
        })
    }

    /// `Σ_k ω_k n̂ᵏ + α_k Ĥ₀ᵏ` from `(k, ω_k, α_k)` triples.
    pub fn from_powers(coupling: Coupling<T>, powers: &[(u32, T, T)]) -> Result<Self> {
        let mut terms = Vec::new();
        for &(k, omega, alpha) in powers {
            if !omega.is_zero() {
                terms.push(Monomial::new(k, 0, omega));
            }
            if !alpha.is_zero() {
                terms.push(Monomial::new(0, k, alpha));
            }
        }
        Self::new(coupling, terms)
    }

    pub fn with_design(mut self, design: Design<T>) -> Self {
        self.design = Some(design);
        self
    }

    pub fn coupling(&self) -> Coupling<T> {
        self.coupling
    }

    pub fn terms(&self) -> &[Monomial<T>] {
        &self.terms
    }

    pub fn design(&self) -> Option<&Design<T>> {
        self.design.as_ref()
    }

    /// Coefficient of `n̂ᵃ Ĥ₀ᵇ`, summing duplicates.
    pub fn coefficient(&self, number_power: u32, h0_power: u32) -> T {
        self.terms
            .iter()
            .filter(|t| t.number_power == number_power && t.h0_power == h0_power)
            .map(|t| t.coeff)
            .sum()
    }

    /// Eigenvalue on `|E⟩` in the `M`-photon subspace, for an `Ĥ₀` energy `E`.
    pub fn eigenvalue_at(&self, total: usize, energy: T) -> T {
        let m = T::of_usize(total);
        self.terms
            .iter()
            .map(|t| t.coeff * m.powi(t.number_power as i32) * energy.powi(t.h0_power as i32))
            .sum()
    }

    /// Every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            coupling: self.coupling,
            terms: self
                .terms
                .iter()
                .map(|t| Monomial::new(t.number_power, t.h0_power, t.coeff * factor))
                .collect(),
            design: self.design,
        }
    }
}

/// Operator restricted to one `M`-photon subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceMatrix<T> {
    pub total: usize,
    pub matrix: SquareMatrix<T>,
}

/// `Ĥ₀ = γ a₁†a₂ + γ* a₂†a₁` in the basis `|M-n, n⟩`.
///
/// `a₂†a₁` raises `n`, so `⟨n+1|Ĥ₀|n⟩ = γ* √((n+1)(M-n))` and the entry above
/// the diagonal is its conjugate.
pub fn h0_matrix<T: Scalar>(total: usize, coupling: Coupling<T>) -> SubspaceMatrix<T> {
    let gamma = coupling.gamma();
    let mut matrix = SquareMatrix::zeros(subspace_dim(total));
    for n in 0..total {
        let weight = T::of_usize((n + 1) * (total - n)).sqrt();
        matrix[(n + 1, n)] = gamma.conj() * weight;
        matrix[(n, n + 1)] = gamma * weight;
    }
    SubspaceMatrix { total, matrix }
}

/// Dense matrix of the spec on the `M`-photon subspace. Powers of `Ĥ₀` are
/// formed by repeated multiplication, one product per extra power.
pub fn nonlinear_matrix<T: Scalar>(spec: &HamiltonianSpec<T>, total: usize) -> SubspaceMatrix<T> {
    let dim = subspace_dim(total);
    let h0 = h0_matrix(total, spec.coupling()).matrix;
    let max_power = spec.terms().iter().map(|t| t.h0_power).max().unwrap_or(0) as usize;
    let mut powers = vec![SquareMatrix::identity(dim)];
    for k in 1..=max_power {
        let next = powers[k - 1].matmul(&h0);
        powers.push(next);
    }
    let m = T::of_usize(total);
    let mut matrix = SquareMatrix::zeros(dim);
    for term in spec.terms() {
        let factor = term.coeff * m.powi(term.number_power as i32);
        matrix.add_scaled(&powers[term.h0_power as usize], factor);
    }
    SubspaceMatrix { total, matrix }
}

/// `ε_x = Σ coeff · Mᵃ E_xᵇ` with `E_x = (2x - M)|γ|`.
pub fn nonlinear_eigenvalue<T: Scalar>(spec: &HamiltonianSpec<T>, total: usize, x: usize) -> Result<T> {
    if x > total {
        return Err(Error::EigenIndexOutOfRange { x, total });
    }
    let energy = lattice_energy::<T>(total, x) * spec.coupling().magnitude();
    Ok(spec.eigenvalue_at(total, energy))
}

fn check_tau<T: Scalar>(tau: T) -> Result<()> {
    if tau > T::zero() && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTau(tau.to_f64_lossy()))
    }
}

/// `π/(2|γ|τ) (3|γ| n̂ + Ĥ₀)`.
pub fn design_lswap<T: Scalar>(coupling: Coupling<T>, tau: T) -> Result<HamiltonianSpec<T>> {
    check_tau(tau)?;
    let g = coupling.magnitude();
    let two = T::lit(2.0);
    let terms = vec![
        Monomial::new(1, 0, T::lit(3.0) * T::PI() / (two * tau)),
        Monomial::new(0, 1, T::PI() / (two * g * tau)),
    ];
    Ok(HamiltonianSpec::new(coupling, terms)?.with_design(Design {
        kind: DesignKind::Lswap,
        tau,
    }))
}

/// `π/(|γ|τ) (|γ| n̂ + |γ|/4 n̂² + Ĥ₀²/(4|γ|))`.
pub fn design_evenswap<T: Scalar>(coupling: Coupling<T>, tau: T) -> Result<HamiltonianSpec<T>> {
    check_tau(tau)?;
    let g = coupling.magnitude();
    let four = T::lit(4.0);
    let terms = vec![
        Monomial::new(1, 0, T::PI() / tau),
        Monomial::new(2, 0, T::PI() / (four * tau)),
        Monomial::new(0, 2, T::PI() / (four * g * g * tau)),
    ];
    Ok(HamiltonianSpec::new(coupling, terms)?.with_design(Design {
        kind: DesignKind::Evenswap,
        tau,
    }))
}

/// `π/(2|γ|τ) (3|γ| n̂² + n̂Ĥ₀ - 3N|γ| n̂ - N Ĥ₀)`, halved when `half` is set.
///
/// On `M` photons the eigenvalue factors as `π/(2|γ|τ)(M - N)(3|γ|M + E)`, so
/// the `M = N` block is annihilated.
pub fn design_pswap<T: Scalar>(
    coupling: Coupling<T>,
    tau: T,
    protected: usize,
    half: bool,
) -> Result<HamiltonianSpec<T>> {
    check_tau(tau)?;
    let g = coupling.magnitude();
    let mut prefactor = T::PI() / (T::lit(2.0) * g * tau);
    if half {
        prefactor = prefactor / T::lit(2.0);
    }
    let three = T::lit(3.0);
    let n = T::of_usize(protected);
    let terms = vec![
        Monomial::new(2, 0, prefactor * three * g),
        Monomial::new(1, 1, prefactor),
        Monomial::new(1, 0, -prefactor * three * n * g),
        Monomial::new(0, 1, -prefactor * n),
    ];
    Ok(HamiltonianSpec::new(coupling, terms)?.with_design(Design {
        kind: DesignKind::Pswap { protected, half },
        tau,
    }))
}

#[derive(Debug, Serialize, Deserialize)]
struct TermDocument {
    a: u32,
    b: u32,
    coeff: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct SpecDocument {
    gamma_re: f64,
    gamma_im: f64,
    terms: Vec<TermDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    protected: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    half: Option<bool>,
}

impl<T: Scalar> HamiltonianSpec<T> {
    /// JSON document with keys `gamma_re`, `gamma_im`, `terms[{a, b, coeff}]`
    /// and, for designed specs, `label`, `tau`, `N`.
    pub fn to_json(&self) -> String {
        let gamma = self.coupling.gamma();
        let (label, tau, protected, half) = match self.design {
            Some(Design { kind, tau }) => {
                let (protected, half) = match kind {
                    DesignKind::Pswap { protected, half } => (Some(protected), Some(half)),
                    _ => (None, None),
                };
                (Some(kind.label().to_string()), Some(tau.to_f64_lossy()), protected, half)
            }
            None => (None, None, None, None),
        };
        let doc = SpecDocument {
            gamma_re: gamma.re.to_f64_lossy(),
            gamma_im: gamma.im.to_f64_lossy(),
            terms: self
                .terms
                .iter()
                .map(|t| TermDocument {
                    a: t.number_power,
                    b: t.h0_power,
                    coeff: t.coeff.to_f64_lossy(),
                })
                .collect(),
            label,
            tau,
            protected,
            half,
        };
        serde_json::to_string_pretty(&doc).expect("spec document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SpecDocument = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let coupling = Coupling::new(Complex::new(T::lit(doc.gamma_re), T::lit(doc.gamma_im)))?;
        let terms = doc
            .terms
            .iter()
            .map(|t| Monomial::new(t.a, t.b, T::lit(t.coeff)))
            .collect();
        let mut spec = Self::new(coupling, terms)?;
        if let Some(label) = doc.label {
            let kind = match label.as_str() {
                "lswap" => DesignKind::Lswap,
                "evenswap" => DesignKind::Evenswap,
                "pswap" | "pswap-half" => DesignKind::Pswap {
                    protected: doc
                        .protected
                        .ok_or_else(|| Error::Json("pswap document needs N".into()))?,
                    half: doc.half.unwrap_or(label == "pswap-half"),
                },
                other => return Err(Error::Json(format!("unknown label {other:?}"))),
            };
            let tau = doc.tau.ok_or_else(|| Error::Json("designed spec needs tau".into()))?;
            check_tau(T::lit(tau))?;
            spec = spec.with_design(Design { kind, tau: T::lit(tau) });
        }
        Ok(spec)
    }
}
