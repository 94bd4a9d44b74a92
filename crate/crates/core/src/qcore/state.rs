use super::linalg::{hermitian_eigenvalues, max_hermitian_deviation};
use super::{CMatrix, CVector, SubsystemLayout, C64};
use crate::error::{Error, Result};
use crate::tolerances;

/// Normalised pure state over a tensor-factor layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    layout: SubsystemLayout,
}

impl StateVector {
    pub fn new(amplitudes: CVector, layout: SubsystemLayout) -> Result<Self> {
        if amplitudes.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm_squared();
        if (norm - 1.0).abs() > tolerances::NORM {
            return Err(Error::InvalidState(format!("squared norm {norm} != 1")));
        }
        Ok(Self { amplitudes, layout })
    }

    /// Normalises `amplitudes` before constructing the state.
    pub fn normalized(amplitudes: CVector, layout: SubsystemLayout) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite norm".into()));
        }
        Self::new(amplitudes / C64::new(norm, 0.0), layout)
    }

    /// Single-qubit state from two amplitudes.
    pub fn qubit(a0: C64, a1: C64, label: &str) -> Result<Self> {
        Self::new(
            CVector::from_vec(vec![a0, a1]),
            SubsystemLayout::qubits(&[label])?,
        )
    }

    /// Computational basis state `index`.
    pub fn basis(index: usize, layout: SubsystemLayout) -> Result<Self> {
        let d = layout.dim();
        if index >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: index,
            });
        }
        let mut amps = CVector::zeros(d);
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self {
            amplitudes: amps,
            layout,
        })
    }

    pub(crate) fn from_parts_unchecked(amplitudes: CVector, layout: SubsystemLayout) -> Self {
        Self { amplitudes, layout }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let amps = self.amplitudes.kronecker(&other.amplitudes);
        Ok(Self {
            amplitudes: amps,
            layout,
        })
    }

    /// |ψ⟩⟨ψ|.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(
            &self.amplitudes * self.amplitudes.adjoint(),
            self.layout.clone(),
        )
    }

    /// Reduced state on `keep`, computed as M M† with M the amplitude matrix
    /// reshaped to (kept × traced).
    pub fn reduced<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let positions = self.layout.positions(keep)?;
        let m = self.split_matrix(&positions);
        Ok(DensityMatrix::from_parts_unchecked(
            &m * m.adjoint(),
            self.layout.select(&positions),
        ))
    }

    /// Amplitudes reshaped into a (kept × rest) matrix.
    pub(crate) fn split_matrix(&self, positions: &[usize]) -> CMatrix {
        let (dk, dr, map) = self.layout.split_index_map(positions);
        CMatrix::from_fn(dk, dr, |k, r| self.amplitudes[map[k * dr + r]])
    }
}

/// Density operator over a tensor-factor layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, layout: SubsystemLayout) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: matrix.nrows(),
            });
        }
        let dev = max_hermitian_deviation(&matrix);
        if dev > tolerances::HERMITICITY {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tolerances::TRACE || tr.im.abs() > tolerances::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = hermitian_eigenvalues(&matrix)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < tolerances::NEGATIVE_EIGENVALUE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, layout })
    }

    /// I/d over the layout.
    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.dim();
        Self {
            matrix: CMatrix::identity(d, d) / C64::new(d as f64, 0.0),
            layout,
        }
    }

    pub(crate) fn from_parts_unchecked(matrix: CMatrix, layout: SubsystemLayout) -> Self {
        Self { matrix, layout }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        // Tr(ρρ) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.norm_squared()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            matrix: self.matrix.kronecker(&other.matrix),
            layout: self.layout.concat(&other.layout)?,
        })
    }

    /// U ρ U†.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        Ok(Self {
            matrix: u * &self.matrix * u.adjoint(),
            layout: self.layout.clone(),
        })
    }

    /// λρ + (1 − λ)σ over the same layout.
    pub fn mix(&self, other: &Self, lambda: f64) -> Result<Self> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * C64::new(lambda, 0.0)
                + &other.matrix * C64::new(1.0 - lambda, 0.0),
            layout: self.layout.clone(),
        })
    }
}

/// Either kind of state, for operations that accept both.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

/// Kronecker product of two states of the same kind.
pub fn tensor(a: &QuantumState, b: &QuantumState) -> Result<QuantumState> {
    match (a, b) {
        (QuantumState::Pure(x), QuantumState::Pure(y)) => Ok(QuantumState::Pure(x.tensor(y)?)),
        (QuantumState::Mixed(x), QuantumState::Mixed(y)) => {
            Ok(QuantumState::Mixed(x.tensor(y)?))
        }
        _ => Err(Error::MixedKinds),
    }
}

/// Reduced state over `keep`, factors in their original relative order.
pub fn partial_trace<S: AsRef<str>>(rho: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    let positions = rho.layout.positions(keep)?;
    let (dk, dr, map) = rho.layout.split_index_map(&positions);
    let m = &rho.matrix;
    let reduced = CMatrix::from_fn(dk, dk, |i, j| {
        let (ri, rj) = (&map[i * dr..(i + 1) * dr], &map[j * dr..(j + 1) * dr]);
        ri.iter().zip(rj).map(|(&a, &b)| m[(a, b)]).sum()
    });
    Ok(DensityMatrix::from_parts_unchecked(
        reduced,
        rho.layout.select(&positions),
    ))
}
