use nalgebra::{DVector, SymmetricEigen};

use super::{CMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerances;

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl HermitianEig {
    /// V f(Λ) V†.
    pub fn apply_fn(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            for x in scaled.column_mut(j).iter_mut() {
                *x *= w;
            }
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_fn(|l| C64::new(l, 0.0))
    }
}

pub fn max_hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn symmetrized(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrised first.
pub fn herm_eig(h: &CMatrix) -> Result<HermitianEig> {
    check_square(h)?;
    let deviation = max_hermitian_deviation(h);
    if deviation > tolerances::EIG_INPUT_HERMITICITY {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = SymmetricEigen::new(symmetrized(h));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<DVector<C64>>>(),
    );
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending) of a matrix assumed Hermitian.
///
/// 1x1 and 2x2 inputs use closed forms; this is the hot path of the
/// measurement-basis search.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - half_gap, mean + half_gap]
        }
        _ => {
            let mut ev: Vec<f64> = SymmetricEigen::new(symmetrized(m))
                .eigenvalues
                .iter()
                .copied()
                .collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}

/// exp(−iHt) through the eigendecomposition of `h` (ħ = 1).
pub fn propagator(h: &CMatrix, t: f64) -> Result<CMatrix> {
    if !t.is_finite() {
        return Err(Error::param("t", "time must be finite"));
    }
    let eig = herm_eig(h)?;
    Ok(eig.apply_fn(|l| C64::from_polar(1.0, -l * t)))
}
