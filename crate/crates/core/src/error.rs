use thiserror::Error;

/// Domain errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Fock index n = {n} exceeds total photon number M = {total}")]
    FockIndexOutOfRange { n: usize, total: usize },
    #[error("eigenvector index x = {x} out of range for M = {total}")]
    EigenIndexOutOfRange { x: usize, total: usize },
    #[error("polynomial degree n = {n} exceeds M + 1 = {}", .total + 1)]
    DegreeOutOfRange { n: usize, total: usize },
    #[error("photon number {requested} exceeds the supported limit {limit}")]
    PhotonLimit { requested: usize, limit: usize },
    #[error("coupling strength must be nonzero and finite")]
    ZeroCoupling,
    #[error("truncation tolerance {0} must lie strictly between 0 and 1")]
    InvalidEpsilon(f64),
    #[error("duration tau = {0} must be positive and finite")]
    InvalidTau(f64),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("amplitude vector must not be empty")]
    EmptyState,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("occupation {occupation:?} does not sum to M = {total}")]
    OccupationMismatch { occupation: [usize; 4], total: usize },
    #[error("mode index {0} is not one of 1..=4")]
    InvalidMode(usize),
    #[error("pair coupling requires two distinct modes, got ({0}, {0})")]
    SameMode(usize),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid Hamiltonian: {0}")]
    InvalidSpec(String),
    #[error("energy {energy} is not an eigenvalue of H0 for M = {total}")]
    OffLattice { energy: f64, total: usize },
    #[error("range of photon numbers is empty")]
    EmptyRange,
    #[error("matrix is not Hermitian (max deviation {0})")]
    NotHermitian(f64),
    #[error("input has support on {0} photons; the sorting cascade accepts at most 4")]
    SortSupport(usize),
    #[error("malformed Hamiltonian document: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
