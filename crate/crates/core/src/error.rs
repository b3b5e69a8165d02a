use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The dataset is structurally malformed (zero weight, wrong weight count, duplicate id, ...).
    #[error("malformed dataset: {0}")]
    Malformed(String),

    /// The weights cannot come from a genuine Hamiltonian circle space.
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("fixed point index {index} out of range (dataset has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    /// `gen_standard_cpn` was handed repeated entries, so the fixed points are not isolated.
    #[error("degenerate action: entries must be pairwise distinct, {0} repeats")]
    DegenerateAction(i64),

    #[error("expected exactly n+1 = {expected} fixed points with Betti vector (1,...,1), found {found} points with Betti vector {betti:?}")]
    WrongFixedPointCount { expected: usize, found: usize, betti: Vec<usize> },

    #[error("n+1 = {modulus} does not divide Gamma_{index} - Gamma_0 = {difference}")]
    DivisibilityFailure { index: usize, modulus: usize, difference: String },

    #[error("Gamma values are not strictly decreasing in the Morse index: Gamma_{index} = {current} but Gamma_{prev} = {previous}", prev = index - 1)]
    GammaOrderFailure { index: usize, previous: String, current: String },

    #[error("sum of Gamma_i is {0}, expected 0")]
    GammaSumNonzero(String),

    /// A cross-check between two independent routes to the same quantity disagreed.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("dataset file: {0}")]
    Format(String),
}
