//! Numerical tolerances used across the crate, gathered in one place.

/// State-vector normalisation.
pub const NORM: f64 = 1e-10;
/// Max elementwise |ρ − ρ†| accepted for a density matrix.
pub const HERMITICITY: f64 = 1e-10;
/// |Tr ρ − 1| accepted for a density matrix.
pub const TRACE: f64 = 1e-10;
/// Smallest eigenvalue accepted for a density matrix.
pub const NEGATIVE_EIGENVALUE: f64 = -1e-10;
/// Hermiticity required of the input to `herm_eig` (it is symmetrised afterwards).
pub const EIG_INPUT_HERMITICITY: f64 = 1e-8;
/// Outcome probabilities at or below this are treated as impossible outcomes.
pub const DEGENERATE_OUTCOME: f64 = 1e-12;
/// Below this system entropy (bits) redundancy and pointer states are undefined.
pub const MIN_ENTROPY: f64 = 1e-6;
/// |φ| must equal one within this for the phase initial state.
pub const UNIT_PHASE: f64 = 1e-12;
/// Orthonormality of a candidate pointer basis.
pub const ORTHONORMAL: f64 = 1e-10;
/// Conditional environment states with Uhlmann fidelity below this count as distinguishable.
pub const SBS_DISTINGUISHABLE: f64 = 0.05;
/// Two χ values closer than this are treated as equal when breaking ties.
pub const CHI_TIE: f64 = 1e-9;

/// Coarse grid used to seed the measurement-basis search: polar divisions over [0, π].
pub const BASIS_GRID_THETA: usize = 24;
/// Azimuthal divisions over [0, 2π).
pub const BASIS_GRID_PHI: usize = 48;
/// Number of best grid points refined by the simplex search.
pub const BASIS_REFINE_STARTS: usize = 3;
/// Simplex diameter (radians) at which refinement stops.
pub const SIMPLEX_DIAMETER: f64 = 1e-7;
/// Evaluation budget per simplex refinement.
pub const SIMPLEX_MAX_EVALS: usize = 500;
