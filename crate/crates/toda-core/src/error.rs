use thiserror::Error;

/// Errors produced by constructors and evaluators.
///
/// Numerical evaluators are total away from genuine solution poles and
/// degenerate data; every variant below names the mathematical condition
/// that failed rather than a code location.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A pivot fell below the singularity threshold during factorization.
    #[error("singular matrix: pivot below 1e-14 of the largest entry")]
    SingularMatrix,

    /// Matrix dimensions do not conform.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An index lies outside its admissible range.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A constructor rejected invalid parameters.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The interaction-coefficient denominator for a soliton pair vanishes.
    #[error("resonant soliton pair ({i}, {j}): interaction denominator below 1e-12")]
    ResonantPair { i: usize, j: usize },

    /// The soliton count exceeds the configured cap (subset enumeration
    /// costs 2^r per point).
    #[error("{r} solitons exceed the configured cap of {cap}")]
    TooManySolitons { r: usize, cap: usize },

    /// The field has a pole at the requested point (a tau zero or a
    /// vanishing determinant).
    #[error("solution pole at (zm = {zm}, zp = {zp})")]
    AtSolutionPole { zm: f64, zp: f64 },

    /// A spectral pole position is zero.
    #[error("pole position must be nonzero")]
    ZeroPole,

    /// The linear system for the rank-one factors is singular at
    /// component index k.
    #[error("pole-data matrix R_k is singular at k = {k}")]
    SingularRk { k: usize },

    /// The spectral parameter is within 1e-8 of a pole of the dressing
    /// function.
    #[error("spectral parameter within 1e-8 of a dressing pole")]
    AtPole,

    /// A one-exponential-per-pole selection is degenerate.
    #[error("degenerate soliton selection: {0}")]
    DegenerateSelection(String),

    /// Cauchy-matrix nodes coincide or collide across the two families.
    #[error("degenerate node configuration: {0}")]
    DegenerateNodes(String),

    /// zⁿ is within 1e-8 of 1, so the partial-fraction sum has a pole.
    #[error("z^n within 1e-8 of 1: partial-fraction identity undefined")]
    AtUnityPole,

    /// Permutation-sum evaluation is capped at 8 indices (l! terms).
    #[error("{l} indices exceed the permutation-sum cap of 8")]
    TooManyIndices { l: usize },

    /// A residual sweep evaluated no cells (all skipped or empty grid).
    #[error("empty grid: no cells were evaluated")]
    EmptyGrid,
}
