//! Dense complex linear algebra and quantum-state primitives.

mod layout;
mod linalg;
mod measures;
mod state;

pub use layout::SubsystemLayout;
pub use linalg::{herm_eig, hermitian_eigenvalues, max_hermitian_deviation, propagator, HermitianEig};
pub use measures::{
    entropy, entropy_in_base, entropy_of_spectrum, fidelity_pure, trace_distance,
    uhlmann_fidelity,
};
pub use state::{partial_trace, tensor, DensityMatrix, QuantumState, StateVector};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Pauli matrices as dense 2x2 matrices.
pub mod pauli {
    use super::{CMatrix, I, ONE, ZERO};

    pub fn identity() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }
}

/// Kronecker product of two dense complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
