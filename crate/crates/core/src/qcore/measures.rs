use super::linalg::{herm_eig, hermitian_eigenvalues};
use super::{DensityMatrix, StateVector, C64};
use crate::error::{Error, Result};

const SPECTRAL_FLOOR: f64 = 1e-13;

/// −Σ λ log_base λ with eigenvalues clamped into [0, 1] and 0·log 0 = 0.
pub fn entropy_of_spectrum(eigenvalues: &[f64], base: f64) -> f64 {
    let ln_base = base.ln();
    eigenvalues
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln() / ln_base)
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    entropy_in_base(rho, 2.0)
}

pub fn entropy_in_base(rho: &DensityMatrix, base: f64) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues(), base)
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// |⟨ψ|φ⟩|².
pub fn fidelity_pure(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    same_dim(psi.dim(), phi.dim())?;
    Ok(psi.amplitudes().dotc(phi.amplitudes()).norm_sqr().min(1.0))
}

/// ½ Σ |eig(ρ − σ)|.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    let diff = rho.matrix() - sigma.matrix();
    let d = 0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// (Tr √(√ρ σ √ρ))².
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    // eigenvalues at rounding level would contribute √ε to the result
    let root = |l: f64| if l > SPECTRAL_FLOOR { l.sqrt() } else { 0.0 };
    let sqrt_rho = herm_eig(rho.matrix())?.apply_fn(|l| C64::new(root(l), 0.0));
    let inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    let root_trace: f64 = hermitian_eigenvalues(&inner).into_iter().map(root).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}
