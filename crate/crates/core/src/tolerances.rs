//! Every numerical threshold used by the library, in one place.
//!
//! Tests import these constants instead of repeating literals so that the
//! library and its checks cannot drift apart.

/// Entry-wise Hermiticity tolerance accepted on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Allowed deviation of a density matrix trace from one.
pub const TRACE_TOL: f64 = 1e-12;

/// Smallest eigenvalue accepted for a positive semidefinite state.
pub const PSD_TOL: f64 = 1e-10;

/// Maximum amount by which `|b|` may exceed one in a stored trajectory.
pub const AMPLITUDE_BOUND_TOL: f64 = 1e-8;

/// `|b|` beyond `1 + SOLVER_INSTABILITY_TOL` is reported as a solver blow-up.
pub const SOLVER_INSTABILITY_TOL: f64 = 1e-6;

/// Slack on `|beta|^2 <= alpha (1 - alpha)` for initial qubit states.
pub const COHERENCE_TOL: f64 = 1e-12;

/// Relative width of the band around `gamma0 = width / 2` classified as critical.
pub const CRITICAL_REL_TOL: f64 = 1e-12;

/// Relative width of the band in which the closed-form amplitude switches to
/// the critical series limit to avoid `kappa -> 0` cancellation.
pub const CRITICAL_BRANCH_REL_TOL: f64 = 1e-9;

/// Forward differences smaller than this are treated as flat.
pub const PLATEAU_TOL: f64 = 1e-14;

/// Default tolerance for treating a local minimum of `|b|` as an exact zero.
pub const DEFAULT_MIN_TOL: f64 = 1e-6;

/// Default tolerance on the bound of the omitted tail of a truncated sum.
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Envelope level at which the measurement horizon truncates the series.
pub const ENVELOPE_CUTOFF: f64 = 1e-8;

/// Slack on the bound `D(t) <= |b(t)|` when checking random state pairs.
pub const THEOREM_TOL: f64 = 1e-9;

/// Required equality `D(t) = |b(t)|` for the optimal `|+>, |->` pair.
pub const OPTIMAL_PAIR_TOL: f64 = 1e-12;

/// Absolute error target for one correlation-function quadrature.
pub const QUADRATURE_TOL: f64 = 1e-11;

/// Maximum recursion depth of adaptive Simpson before declaring failure.
pub const QUADRATURE_MAX_DEPTH: u32 = 40;
